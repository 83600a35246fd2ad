//! Convex lattice polygons: hulls, lattice points, volumes and widths.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::point::{add, mul, orient, sub, Point};

/// A two-dimensional convex lattice polygon.
///
/// Vertices are stored in strictly convex position, counter-clockwise,
/// starting from the lexicographically minimal vertex. Values are immutable
/// after construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polygon {
    verts: Vec<Point>,
}

impl Polygon {
    /// Convex hull of a finite point set.
    ///
    /// Points interior to the hull or on its edges are dropped; the result is
    /// `Err(Dimension)` when the hull is a point or a segment.
    pub fn hull(points: &[Point]) -> Result<Polygon, Error> {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Dimension);
        }

        // Monotone chain with strict turns only, so collinear points are
        // never kept as vertices.
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::Dimension);
        }
        // The chain starts at the sorted minimum, which is the lex-min vertex.
        Ok(Polygon { verts: lower })
    }

    /// Rebuild a polygon from a known convex vertex cycle (either orientation).
    ///
    /// Cheaper than a full hull; validates strict convexity and re-anchors the
    /// cycle at the lexicographic minimum.
    pub fn from_cycle(mut cycle: Vec<Point>) -> Result<Polygon, Error> {
        let n = cycle.len();
        if n < 3 {
            return Err(Error::Dimension);
        }
        let area2: i64 = {
            let mut s = 0i64;
            for i in 0..n {
                s = add(s, cycle[i].cross(cycle[(i + 1) % n]));
            }
            s
        };
        if area2 == 0 {
            return Err(Error::Dimension);
        }
        if area2 < 0 {
            cycle.reverse();
        }
        for i in 0..n {
            if orient(cycle[i], cycle[(i + 1) % n], cycle[(i + 2) % n]) <= 0 {
                return Err(Error::Dimension);
            }
        }
        let start = (0..n).min_by_key(|&i| cycle[i]).expect("nonempty");
        cycle.rotate_left(start);
        Ok(Polygon { verts: cycle })
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn translate(&self, t: Point) -> Polygon {
        Polygon {
            verts: self.verts.iter().map(|v| v.add(t)).collect(),
        }
    }

    /// Bounding box as `(min, max)` corners.
    pub fn bounding_box(&self) -> (Point, Point) {
        let xs = self.verts.iter().map(|v| v.x);
        let ys = self.verts.iter().map(|v| v.y);
        (
            Point::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            Point::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// Translate so the bounding box corner sits at the origin.
    pub fn to_corner(&self) -> Polygon {
        let (lo, _) = self.bounding_box();
        self.translate(lo.neg())
    }

    /// Twice the Euclidean area; a positive integer for any lattice polygon.
    pub fn normalized_volume(&self) -> u64 {
        let n = self.verts.len();
        let mut s = 0i64;
        for i in 0..n {
            s = add(s, self.verts[i].cross(self.verts[(i + 1) % n]));
        }
        debug_assert!(s > 0, "vertices are stored counter-clockwise");
        s as u64
    }

    /// Width along a dual vector `u`: `max⟨u,p⟩ − min⟨u,p⟩` over the polygon.
    pub fn width_along(&self, u: Point) -> Result<u64, Error> {
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &v in &self.verts {
            let d = v.dot(u);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        Ok(sub(hi, lo) as u64)
    }

    /// Side of the smallest axis-aligned square containing a translate of the
    /// polygon (no change of basis).
    pub fn bounding_square_size(&self) -> u32 {
        let wx = self.width_along(Point::new(1, 0)).expect("nonzero");
        let wy = self.width_along(Point::new(0, 1)).expect("nonzero");
        wx.max(wy) as u32
    }

    /// `true` when `p` lies inside or on the boundary.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| orient(self.verts[i], self.verts[(i + 1) % n], p) >= 0)
    }

    /// `true` when `p` lies strictly inside.
    pub fn contains_strictly(&self, p: Point) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| orient(self.verts[i], self.verts[(i + 1) % n], p) > 0)
    }

    /// Number of lattice points on the boundary.
    pub fn boundary_point_count(&self) -> u64 {
        let n = self.verts.len();
        (0..n)
            .map(|i| self.verts[(i + 1) % n].sub(self.verts[i]).gcd() as u64)
            .sum()
    }

    /// Number of lattice points in the polygon, via the volume relation
    /// `2A = 2i + b − 2`. Cross-checked against `lattice_points` in tests.
    pub fn lattice_point_count(&self) -> u64 {
        let b = self.boundary_point_count();
        let interior = (self.normalized_volume() + 2 - b) / 2;
        interior + b
    }

    /// All lattice points inside or on the boundary, sorted lexicographically.
    ///
    /// Row sweep with exact ceiling/floor division, `O(height · edges)`.
    pub fn lattice_points(&self) -> Vec<Point> {
        let (lo, hi) = self.bounding_box();
        let n = self.verts.len();
        let mut out = Vec::with_capacity(self.lattice_point_count() as usize);
        for y in lo.y..=hi.y {
            let mut xlo = lo.x;
            let mut xhi = hi.x;
            let mut empty = false;
            for i in 0..n {
                let a = self.verts[i];
                let e = self.verts[(i + 1) % n].sub(a);
                // Interior side of edge i: e.x*(py - a.y) - e.y*(px - a.x) >= 0.
                let rhs = add(mul(e.x, sub(y, a.y)), mul(e.y, a.x));
                match e.y.cmp(&0) {
                    core::cmp::Ordering::Greater => xhi = xhi.min(rhs.div_euclid(e.y)),
                    core::cmp::Ordering::Less => {
                        // Dividing by a negative flips to a lower bound:
                        // x >= rhs / e.y, i.e. x >= -floor(rhs / -e.y).
                        xlo = xlo.max(-(rhs.div_euclid(-e.y)))
                    }
                    core::cmp::Ordering::Equal => {
                        if rhs < 0 {
                            empty = true;
                            break;
                        }
                    }
                }
            }
            if !empty {
                for x in xlo..=xhi {
                    out.push(Point::new(x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Parse one vertex list in the repo-wide text format `[[x1,y1],[x2,y2],...]`.
pub fn parse_vertex_list(line: &str) -> Result<Vec<Point>, Error> {
    let bad = |reason: &str| Error::Parse {
        reason: String::from(reason),
    };
    let s = line.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected outer [ ... ]"))?
        .trim();
    if inner.is_empty() {
        return Err(bad("empty vertex list"));
    }
    let mut points = Vec::new();
    let mut rest = inner;
    loop {
        rest = rest.trim_start();
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| bad("expected [x,y]"))?;
        let end = body.find(']').ok_or_else(|| bad("unclosed [x,y]"))?;
        let (pair, tail) = body.split_at(end);
        let mut nums = pair.split(',');
        let x = nums
            .next()
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| bad("missing x coordinate"))?;
        let y = nums
            .next()
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| bad("missing y coordinate"))?;
        if nums.next().is_some() {
            return Err(bad("more than two coordinates in a vertex"));
        }
        let x: i64 = x.parse().map_err(|_| bad("x is not an integer"))?;
        let y: i64 = y.parse().map_err(|_| bad("y is not an integer"))?;
        points.push(Point::new(x, y));
        rest = tail[1..].trim_start();
        if rest.is_empty() {
            break;
        }
        rest = rest
            .strip_prefix(',')
            .ok_or_else(|| bad("expected ',' between vertices"))?;
        if rest.trim().is_empty() {
            return Err(bad("trailing comma"));
        }
    }
    Ok(points)
}

/// Serialize a polygon in the text format, vertices in canonical order.
pub fn format_polygon(p: &Polygon) -> String {
    let mut s = String::from("[");
    for (i, v) in p.vertices().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("[{},{}]", v.x, v.y));
    }
    s.push(']');
    s
}

/// The axis-aligned box `[0,m] × [0,m]` as a polygon.
pub fn box_polygon(m: u32) -> Polygon {
    let m = m as i64;
    assert!(m >= 1);
    Polygon::hull(&[
        Point::new(0, 0),
        Point::new(m, 0),
        Point::new(m, m),
        Point::new(0, m),
    ])
    .expect("box is two-dimensional")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(list: &[(i64, i64)]) -> Vec<Point> {
        list.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn hull_drops_edge_points() {
        let p = Polygon::hull(&pts(&[(0, 0), (2, 0), (0, 2), (1, 1)])).unwrap();
        assert_eq!(p.vertices(), pts(&[(0, 0), (2, 0), (0, 2)]).as_slice());
    }

    #[test]
    fn hull_unit_square() {
        let p = Polygon::hull(&pts(&[(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.vertices()[0], Point::new(0, 0));
        assert_eq!(p.normalized_volume(), 2);
    }

    #[test]
    fn hull_rejects_collinear() {
        assert_eq!(
            Polygon::hull(&pts(&[(0, 0), (3, 0), (6, 0)])),
            Err(Error::Dimension)
        );
        assert_eq!(Polygon::hull(&pts(&[(0, 0), (1, 1)])), Err(Error::Dimension));
    }

    #[test]
    fn volume_examples() {
        let tri = Polygon::hull(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(tri.normalized_volume(), 1);
        // Five-vertex polygon with volume 13 and axis widths 3, 3.
        let p = Polygon::hull(&pts(&[(-1, 2), (1, 2), (1, 0), (-1, -1), (-2, -1)])).unwrap();
        assert_eq!(p.vertex_count(), 5);
        assert_eq!(p.normalized_volume(), 13);
        assert_eq!(p.width_along(Point::new(1, 0)).unwrap(), 3);
        assert_eq!(p.width_along(Point::new(0, 1)).unwrap(), 3);
        assert_eq!(p.bounding_square_size(), 3);
    }

    #[test]
    fn width_examples() {
        let b3 = box_polygon(3);
        assert_eq!(b3.width_along(Point::new(1, 0)).unwrap(), 3);
        assert_eq!(b3.width_along(Point::new(1, 1)).unwrap(), 6);
        assert_eq!(b3.width_along(Point::new(-1, 0)).unwrap(), 3);
        assert_eq!(b3.width_along(Point::ORIGIN), Err(Error::ZeroVector));
    }

    #[test]
    fn bounding_square_examples() {
        assert_eq!(box_polygon(1).bounding_square_size(), 1);
        let tri = Polygon::hull(&pts(&[(0, 0), (7, 0), (0, 7)])).unwrap();
        assert_eq!(tri.bounding_square_size(), 7);
        // Translation-invariant.
        assert_eq!(tri.translate(Point::new(-3, 11)).bounding_square_size(), 7);
    }

    #[test]
    fn lattice_point_enumeration() {
        assert_eq!(box_polygon(1).lattice_points().len(), 4);
        let tri = Polygon::hull(&pts(&[(0, 0), (2, 0), (0, 2)])).unwrap();
        let lp = tri.lattice_points();
        assert_eq!(lp.len(), 6);
        assert_eq!(lp, pts(&[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]));
        assert_eq!(tri.lattice_point_count(), 6);
    }

    #[test]
    fn counts_match_enumeration() {
        let samples = vec![
            Polygon::hull(&pts(&[(-1, 2), (1, 2), (1, 0), (-1, -1), (-2, -1)])).unwrap(),
            Polygon::hull(&pts(&[(0, 0), (5, 1), (2, 7), (-3, 4)])).unwrap(),
            Polygon::hull(&pts(&[(0, 0), (7, 0), (0, 1)])).unwrap(),
            box_polygon(6),
        ];
        for p in samples {
            assert_eq!(p.lattice_point_count() as usize, p.lattice_points().len());
            // 2A = 2i + b - 2 with the enumerated counts.
            let b = p.boundary_point_count();
            let total = p.lattice_points().len() as u64;
            assert_eq!(p.normalized_volume(), 2 * (total - b) + b - 2);
        }
    }

    #[test]
    fn from_cycle_accepts_both_orientations() {
        let ccw = Polygon::from_cycle(pts(&[(0, 0), (2, 0), (2, 2), (0, 2)])).unwrap();
        let cw = Polygon::from_cycle(pts(&[(0, 2), (2, 2), (2, 0), (0, 0)])).unwrap();
        assert_eq!(ccw, cw);
        assert!(Polygon::from_cycle(pts(&[(0, 0), (1, 0), (2, 0), (0, 1)])).is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let line = "[[0,0],[2,0],[0,2]]";
        let p = Polygon::hull(&parse_vertex_list(line).unwrap()).unwrap();
        assert_eq!(format_polygon(&p), line);
        // Any input order is accepted.
        let q = Polygon::hull(&parse_vertex_list("[[0,2], [0,0], [2,0]]").unwrap()).unwrap();
        assert_eq!(p, q);
        assert!(parse_vertex_list("[[0,0],[1]]").is_err());
        assert!(parse_vertex_list("nonsense").is_err());
        assert!(parse_vertex_list("[[0,0],[1,0],]").is_err());
        assert!(parse_vertex_list("[[a,0],[1,0]]").is_err());
    }

    #[test]
    fn contains_checks() {
        let p = box_polygon(2);
        assert!(p.contains(Point::new(1, 1)));
        assert!(p.contains(Point::new(0, 2)));
        assert!(!p.contains(Point::new(3, 1)));
        assert!(p.contains_strictly(Point::new(1, 1)));
        assert!(!p.contains_strictly(Point::new(0, 2)));
    }

}
