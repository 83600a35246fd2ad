//! Affine lattice automorphisms: integer 2×2 matrices of determinant ±1
//! together with an integer translation.

use alloc::vec::Vec;

use crate::error::Error;
use crate::point::{add, mul, sub, Point};
use crate::polygon::Polygon;

/// The map `p ↦ M·p + t` with `det M = ±1`.
///
/// Composition and inversion stay within the type, so these maps form a
/// group acting on polygons.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnimodularMap {
    /// Matrix rows: `(a, b; c, d)`.
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub t: Point,
}

impl UnimodularMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64, t: Point) -> Result<UnimodularMap, Error> {
        let det = sub(mul(a, d), mul(b, c));
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular);
        }
        Ok(UnimodularMap { a, b, c, d, t })
    }

    pub fn linear(a: i64, b: i64, c: i64, d: i64) -> Result<UnimodularMap, Error> {
        UnimodularMap::new(a, b, c, d, Point::ORIGIN)
    }

    pub fn identity() -> UnimodularMap {
        UnimodularMap { a: 1, b: 0, c: 0, d: 1, t: Point::ORIGIN }
    }

    pub fn translation(t: Point) -> UnimodularMap {
        UnimodularMap { a: 1, b: 0, c: 0, d: 1, t }
    }

    #[inline]
    pub fn det(&self) -> i64 {
        sub(mul(self.a, self.d), mul(self.b, self.c))
    }

    #[inline]
    pub fn apply_point(&self, p: Point) -> Point {
        Point::new(
            add(add(mul(self.a, p.x), mul(self.b, p.y)), self.t.x),
            add(add(mul(self.c, p.x), mul(self.d, p.y)), self.t.y),
        )
    }

    /// Linear part only, ignoring the translation.
    #[inline]
    pub fn apply_vector(&self, v: Point) -> Point {
        Point::new(
            add(mul(self.a, v.x), mul(self.b, v.y)),
            add(mul(self.c, v.x), mul(self.d, v.y)),
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            a: add(mul(self.a, other.a), mul(self.b, other.c)),
            b: add(mul(self.a, other.b), mul(self.b, other.d)),
            c: add(mul(self.c, other.a), mul(self.d, other.c)),
            d: add(mul(self.c, other.b), mul(self.d, other.d)),
            t: self.apply_point(other.t),
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        // For det = ±1 the inverse matrix is det · adj(M).
        let s = self.det();
        let inv = UnimodularMap {
            a: mul(s, self.d),
            b: mul(s, -self.b),
            c: mul(s, -self.c),
            d: mul(s, self.a),
            t: Point::ORIGIN,
        };
        UnimodularMap {
            t: inv.apply_point(self.t).neg(),
            ..inv
        }
    }

    /// The transpose of the linear part; this is the induced action on the
    /// dual lattice of width directions.
    pub fn transpose_linear(&self) -> UnimodularMap {
        UnimodularMap { a: self.a, b: self.c, c: self.b, d: self.d, t: Point::ORIGIN }
    }

    /// Image polygon. Volume, vertex count and lattice point count are
    /// preserved; orientation is restored if the determinant is negative.
    pub fn apply(&self, p: &Polygon) -> Polygon {
        let cycle: Vec<Point> = p.vertices().iter().map(|&v| self.apply_point(v)).collect();
        Polygon::from_cycle(cycle).expect("unimodular image of a polygon is a polygon")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::box_polygon;
    use alloc::vec;

    #[test]
    fn determinant_gate() {
        assert!(UnimodularMap::linear(1, 1, 0, 1).is_ok());
        assert!(UnimodularMap::linear(2, 0, 0, 1).is_err());
        assert!(UnimodularMap::linear(1, 0, 0, 0).is_err());
    }

    #[test]
    fn shear_on_triangle() {
        let tri = Polygon::hull(&[Point::new(0, 0), Point::new(1, 0), Point::new(0, 1)]).unwrap();
        let shear = UnimodularMap::linear(1, 1, 0, 1).unwrap();
        let img = shear.apply(&tri);
        let expect =
            Polygon::hull(&[Point::new(0, 0), Point::new(1, 0), Point::new(1, 1)]).unwrap();
        assert_eq!(img, expect);
    }

    #[test]
    fn identity_and_inverse() {
        let p = box_polygon(3);
        let id = UnimodularMap::identity();
        assert_eq!(id.apply(&p), p);
        let m = UnimodularMap::new(2, 3, 1, 2, Point::new(5, -7)).unwrap();
        let round = m.inverse().compose(&m);
        assert_eq!(round, UnimodularMap::identity());
        assert_eq!(m.inverse().apply(&m.apply(&p)), p);
    }

    #[test]
    fn invariants_preserved() {
        let samples = vec![
            box_polygon(2),
            Polygon::hull(&[Point::new(-1, 2), Point::new(1, 2), Point::new(1, 0),
                            Point::new(-1, -1), Point::new(-2, -1)]).unwrap(),
        ];
        let maps = vec![
            UnimodularMap::new(1, 4, 0, 1, Point::new(3, 3)).unwrap(),
            UnimodularMap::new(0, -1, 1, 0, Point::new(-2, 9)).unwrap(),
            UnimodularMap::new(1, 0, 0, -1, Point::ORIGIN).unwrap(),
            UnimodularMap::new(3, 2, 4, 3, Point::new(1, 0)).unwrap(),
        ];
        for p in &samples {
            for m in &maps {
                let q = m.apply(p);
                assert_eq!(q.normalized_volume(), p.normalized_volume());
                assert_eq!(q.vertex_count(), p.vertex_count());
                assert_eq!(q.lattice_point_count(), p.lattice_point_count());
            }
        }
    }

    #[test]
    fn width_transposes() {
        let p = Polygon::hull(&[Point::new(0, 0), Point::new(5, 1), Point::new(2, 7)]).unwrap();
        let m = UnimodularMap::linear(2, 1, 1, 1).unwrap();
        let q = m.apply(&p);
        for u in [Point::new(1, 0), Point::new(0, 1), Point::new(3, -2)] {
            let ut = m.transpose_linear().apply_vector(u);
            assert_eq!(q.width_along(u).unwrap(), p.width_along(ut).unwrap());
        }
    }
}
