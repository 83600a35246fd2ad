//! Polygons with an interior origin and primitive vertices, their rational
//! duals and index, and minimum-bounding-square search.
//!
//! The minimum-box search adapts the minimal lattice-width algorithm: the
//! largest disc centred at the vertex centroid bounds, in the dual plane, the
//! region where a direction of small width can live; all such directions are
//! enumerated exactly (squared radii only, no floating point), and dual basis
//! pairs among them give every way to fit an equivalent polygon in a box.

use alloc::vec::Vec;

use crate::error::Error;
use crate::point::Point;
use crate::polygon::Polygon;
use crate::rational::{Rational, RationalPoint};
use crate::unimodular::UnimodularMap;

/// A convex polygon with rational vertices, counter-clockwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPolygon {
    verts: Vec<RationalPoint>,
}

impl RationalPolygon {
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.verts
    }

    /// `true` when the origin is strictly inside.
    pub fn origin_strictly_interior(&self) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            b.sub(a).cross(RationalPoint::new(Rational::ZERO, Rational::ZERO).sub(a)).signum() > 0
        })
    }

    /// Polar dual `{v : ⟨v,u⟩ ≥ −1 for all u}`; each edge contributes the
    /// vertex where both endpoint constraints are tight.
    pub fn dual(&self) -> Result<RationalPolygon, Error> {
        if !self.origin_strictly_interior() {
            return Err(Error::OriginNotInterior);
        }
        let n = self.verts.len();
        let mut verts = Vec::with_capacity(n);
        for i in 0..n {
            let u1 = self.verts[i];
            let u2 = self.verts[(i + 1) % n];
            let det = u1.cross(u2);
            debug_assert!(det.signum() > 0);
            verts.push(RationalPoint::new(
                u1.y.sub(u2.y).div(det),
                u2.x.sub(u1.x).div(det),
            ));
        }
        Ok(RationalPolygon { verts })
    }

    /// Exact lattice polygon, if every vertex is integral.
    pub fn to_lattice(&self) -> Option<Polygon> {
        let mut pts = Vec::with_capacity(self.verts.len());
        for v in &self.verts {
            if !v.x.is_integer() || !v.y.is_integer() {
                return None;
            }
            pts.push(Point::new(v.x.numerator() as i64, v.y.numerator() as i64));
        }
        Polygon::from_cycle(pts).ok()
    }

    pub fn dilate(&self, factor: i64) -> RationalPolygon {
        let f = Rational::from_int(factor);
        RationalPolygon {
            verts: self
                .verts
                .iter()
                .map(|v| RationalPoint::new(v.x.mul(f), v.y.mul(f)))
                .collect(),
        }
    }
}

/// Embed a lattice polygon as a rational one.
pub fn to_rational(p: &Polygon) -> RationalPolygon {
    RationalPolygon {
        verts: p
            .vertices()
            .iter()
            .map(|v| RationalPoint::new(Rational::from_int(v.x), Rational::from_int(v.y)))
            .collect(),
    }
}

/// Origin strictly interior and every vertex primitive.
pub fn is_ldp(p: &Polygon) -> bool {
    p.contains_strictly(Point::ORIGIN) && p.vertices().iter().all(|v| v.is_primitive())
}

/// Polar dual of a lattice polygon with the origin strictly inside.
pub fn dual_polygon(p: &Polygon) -> Result<RationalPolygon, Error> {
    to_rational(p).dual()
}

/// Smallest `ℓ ≥ 1` such that `ℓ·P*` is a lattice polygon: the least common
/// multiple of the dual vertex denominators.
pub fn gorenstein_index(p: &Polygon) -> Result<u64, Error> {
    let dual = dual_polygon(p)?;
    let mut l: i128 = 1;
    for v in dual.vertices() {
        for den in [v.x.denominator(), v.y.denominator()] {
            let g = {
                let (mut a, mut b) = (l, den);
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            };
            l = l / g * den;
        }
    }
    Ok(l as u64)
}

/// Result of the minimum-bounding-square search.
#[derive(Clone, Debug)]
pub struct MinimumBox {
    /// Smallest box size admitting an equivalent polygon.
    pub m: u32,
    /// Every placement into the minimum box, as (map, corner-translated image),
    /// sorted by image vertex list. Nonempty.
    pub embeddings: Vec<(UnimodularMap, Polygon)>,
}

/// Squared radius of the largest origin-free disc: minimum over edges of the
/// squared distance from the vertex centroid to the edge's supporting line.
/// Returned as `(num, den)` of the exact rational value.
fn inscribed_disc_radius_sq(p: &Polygon) -> (i128, i128) {
    let n = p.vertices().len() as i128;
    // Centroid = (sum of vertices) / n; distances are computed with the
    // centroid scaled by n to stay in integers.
    let mut sx: i128 = 0;
    let mut sy: i128 = 0;
    for v in p.vertices() {
        sx += v.x as i128;
        sy += v.y as i128;
    }
    let mut best: Option<(i128, i128)> = None;
    let verts = p.vertices();
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        let nx = -(b.y - a.y) as i128;
        let ny = (b.x - a.x) as i128;
        let c = nx * a.x as i128 + ny * a.y as i128;
        // dist² = (n·z − c)² / |n|² with z = (sx, sy)/n.
        let num = (nx * sx + ny * sy - c * n).pow(2);
        let den = (nx * nx + ny * ny) * n * n;
        let better = match best {
            None => true,
            Some((bn, bd)) => num * bd < bn * den,
        };
        if better {
            best = Some((num, den));
        }
    }
    let (num, den) = best.expect("polygon has edges");
    debug_assert!(num > 0, "centroid is strictly interior");
    (num, den)
}

/// `true` when a direction of squared norm `norm_sq` can still have width
/// ≤ `w` given the disc radius `r² = rn/rd`: the test is `4·r²·|u|² ≤ w²`.
#[inline]
fn disc_admits(norm_sq: i128, w: u64, rn: i128, rd: i128) -> bool {
    4 * rn * norm_sq <= (w as i128) * (w as i128) * rd
}

/// Enumerate primitive dual directions in the upper half plane, cheapest
/// rings first, calling `visit(u, width)` for each; `visit` returns the
/// current width cap `w`: rings stop once they cannot contain a direction of
/// width ≤ `w`.
fn scan_directions(p: &Polygon, rn: i128, rd: i128, mut w: u64, mut visit: impl FnMut(Point, u64) -> u64) {
    let mut ring: i64 = 1;
    loop {
        if !disc_admits((ring * ring) as i128, w, rn, rd) {
            break;
        }
        // Points with max(|x|, |y|) == ring, upper half plane only
        // (u and −u have the same width).
        let mut handle = |x: i64, y: i64, w: &mut u64| {
            let u = Point::new(x, y);
            if !u.is_primitive() {
                return;
            }
            if !disc_admits(u.norm_sq() as i128, *w, rn, rd) {
                return;
            }
            let wu = p.width_along(u).expect("nonzero direction");
            *w = visit(u, wu);
        };
        for x in -ring..=ring {
            handle(x, ring, &mut w);
        }
        for y in 1..ring {
            handle(ring, y, &mut w);
            handle(-ring, y, &mut w);
        }
        handle(ring, 0, &mut w);
        ring += 1;
    }
}

/// Smallest box containing an equivalent polygon, with all placements.
///
/// The result depends only on the equivalence class of `p`.
pub fn minimum_box(p: &Polygon) -> MinimumBox {
    let (rn, rd) = inscribed_disc_radius_sq(p);
    let w1 = p.width_along(Point::new(1, 0)).unwrap();
    let w2 = p.width_along(Point::new(0, 1)).unwrap();
    let mut best = w1.max(w2);

    // Shrink `best` by pairing enumerated directions: any unimodular pair
    // (u, v) realises the box max(width u, width v).
    let mut candidates: Vec<(Point, u64)> = Vec::new();
    scan_directions(p, rn, rd, best.saturating_sub(1), |u, wu| {
        if wu < best {
            for &(v, wv) in &candidates {
                if wv < best && u.cross(v).abs() == 1 {
                    best = best.min(wu.max(wv));
                }
            }
            candidates.push((u, wu));
        }
        best.saturating_sub(1)
    });

    let m = best as u32;
    let embeddings = embeddings_into(p, m, rn, rd);
    debug_assert!(!embeddings.is_empty());
    MinimumBox { m, embeddings }
}

fn embeddings_into(p: &Polygon, m: u32, rn: i128, rd: i128) -> Vec<(UnimodularMap, Polygon)> {
    let mut cands: Vec<(Point, u64)> = Vec::new();
    scan_directions(p, rn, rd, m as u64, |u, wu| {
        if wu <= m as u64 {
            cands.push((u, wu));
        }
        m as u64
    });
    let mut out: Vec<(UnimodularMap, Polygon)> = Vec::new();
    let mut seen: Vec<Vec<Point>> = Vec::new();
    let signed = |u: Point, s: bool| if s { u.neg() } else { u };
    for &(u, _) in &cands {
        for &(v, _) in &cands {
            if u.cross(v).abs() != 1 {
                continue;
            }
            for su in [false, true] {
                for sv in [false, true] {
                    let ru = signed(u, su);
                    let rv = signed(v, sv);
                    let map = UnimodularMap::linear(ru.x, ru.y, rv.x, rv.y)
                        .expect("pair is unimodular");
                    let img = map.apply(p).to_corner();
                    let key: Vec<Point> = img.vertices().to_vec();
                    if seen.contains(&key) {
                        continue;
                    }
                    seen.push(key);
                    let shift = map.apply(p).bounding_box().0.neg();
                    let full = UnimodularMap::translation(shift).compose(&map);
                    debug_assert_eq!(full.apply(p), img);
                    out.push((full, img));
                }
            }
        }
    }
    out.sort_by(|a, b| a.1.vertices().cmp(b.1.vertices()));
    out
}

/// Every placement of a polygon equivalent to `p` into the box of size `m`,
/// up to translation, sorted canonically.
pub fn all_embeddings(p: &Polygon, m: u32) -> Result<Vec<Polygon>, Error> {
    let minimum = minimum_box(p);
    if minimum.m > m {
        return Err(Error::BoxTooSmall { required: minimum.m, given: m });
    }
    let (rn, rd) = inscribed_disc_radius_sq(p);
    Ok(embeddings_into(p, m, rn, rd).into_iter().map(|(_, img)| img).collect())
}
