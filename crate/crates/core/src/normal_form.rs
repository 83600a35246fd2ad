//! Canonical forms for affine unimodular equivalence of lattice polygons.
//!
//! Two polygons are equivalent when one is the image of the other under an
//! integer affine map whose linear part has determinant ±1. The canonical
//! key is computed from a bounded family of candidate images: for each
//! vertex and each of its two incident primitive edge directions, there is a
//! unique unimodular map sending that direction to `(1,0)` and the other
//! incident direction to `(c,e)` with `e > 0`, `0 ≤ c < e` (a Hermite-style
//! completion). Each candidate image is re-anchored with its lexicographically
//! minimal vertex at the origin and encoded as an integer sequence; the key
//! is the lexicographic minimum over all candidates.
//!
//! The candidate family is equivariant, so equivalent polygons produce the
//! same candidate set and hence equal keys, while a key decodes back to a
//! representative of its class.

use alloc::vec::Vec;

use crate::point::{extended_gcd, Point};
use crate::polygon::Polygon;
use crate::unimodular::UnimodularMap;

/// Canonical key of an equivalence class.
///
/// Encoding: `[n, x1, y1, ..., x_{n-1}, y_{n-1}]` over the counter-clockwise
/// vertex cycle of the canonical image, anchored so the first (lexicographically
/// minimal) vertex is the origin and therefore omitted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NormalForm(Vec<i32>);

impl NormalForm {
    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn from_raw(raw: Vec<i32>) -> NormalForm {
        NormalForm(raw)
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    /// The distinguished representative polygon of the class.
    pub fn canonical_polygon(&self) -> Polygon {
        let n = self.0[0] as usize;
        let mut cycle = Vec::with_capacity(n);
        cycle.push(Point::ORIGIN);
        for i in 0..n - 1 {
            cycle.push(Point::new(self.0[1 + 2 * i] as i64, self.0[2 + 2 * i] as i64));
        }
        Polygon::from_cycle(cycle).expect("normal form encodes a valid polygon")
    }
}

/// The unique unimodular matrix sending `d1 ↦ (1,0)` and `d2 ↦ (c,e)` with
/// `e > 0` and `0 ≤ c < e`. Requires `d1` primitive and `d2` independent.
fn frame_normalizer(d1: Point, d2: Point) -> UnimodularMap {
    debug_assert!(d1.is_primitive());
    let (g, x, y) = extended_gcd(d1.x, d1.y);
    debug_assert_eq!(g, 1);
    // Rows (x, y) and (-d1.y, d1.x): determinant x*d1.x + y*d1.y = 1.
    let mut m = UnimodularMap::linear(x, y, -d1.y, d1.x).expect("determinant is 1");
    let img = m.apply_vector(d2);
    debug_assert!(img.y != 0, "edge directions at a vertex are independent");
    if img.y < 0 {
        m = UnimodularMap::linear(1, 0, 0, -1).unwrap().compose(&m);
    }
    let img = m.apply_vector(d2);
    let shift = -img.x.div_euclid(img.y);
    m = UnimodularMap::linear(1, shift, 0, 1).unwrap().compose(&m);
    if cfg!(debug_assertions) {
        let f = m.apply_vector(d2);
        debug_assert_eq!(m.apply_vector(d1), Point::new(1, 0));
        debug_assert!(f.y > 0 && 0 <= f.x && f.x < f.y);
    }
    m
}

/// Unimodular type of an ordered pair of primitive directions: `(e, c)`
/// where the normalizer fixing `d1 ↦ (1,0)` sends `d2 ↦ (c, e)`.
pub fn frame_key(d1: Point, d2: Point) -> (i64, i64) {
    let m = frame_normalizer(d1, d2);
    let img = m.apply_vector(d2);
    (img.y, img.x)
}

fn encode_candidate(cycle: &[Point]) -> Vec<i32> {
    let n = cycle.len();
    let start = (0..n).min_by_key(|&i| cycle[i]).expect("nonempty");
    let anchor = cycle[start];
    let mut enc = Vec::with_capacity(2 * n - 1);
    enc.push(n as i32);
    for i in 1..n {
        let v = cycle[(start + i) % n].sub(anchor);
        let x = i32::try_from(v.x).expect("coordinate fits in 32 bits");
        let y = i32::try_from(v.y).expect("coordinate fits in 32 bits");
        enc.push(x);
        enc.push(y);
    }
    enc
}

/// Canonical key of the polygon's equivalence class.
pub fn normal_form(p: &Polygon) -> NormalForm {
    let verts = p.vertices();
    let n = verts.len();
    let mut best: Option<Vec<i32>> = None;
    let mut mapped = Vec::with_capacity(n);
    for i in 0..n {
        let v = verts[i];
        let next = verts[(i + 1) % n].sub(v).primitive().expect("edge is nonzero");
        let prev = verts[(i + n - 1) % n].sub(v).primitive().expect("edge is nonzero");
        for (d1, d2) in [(next, prev), (prev, next)] {
            let m = frame_normalizer(d1, d2);
            mapped.clear();
            mapped.extend(verts.iter().map(|&w| m.apply_vector(w.sub(v))));
            // A determinant -1 map reverses the cycle orientation.
            if m.det() < 0 {
                mapped.reverse();
            }
            let enc = encode_candidate(&mapped);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    NormalForm(best.expect("polygon has vertices"))
}

/// Equivalence test: quick invariant rejection, then key comparison.
pub fn is_equivalent(p: &Polygon, q: &Polygon) -> bool {
    if p.vertex_count() != q.vertex_count()
        || p.normalized_volume() != q.normalized_volume()
        || p.lattice_point_count() != q.lattice_point_count()
    {
        return false;
    }
    normal_form(p) == normal_form(q)
}
