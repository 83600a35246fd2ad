//! Exhaustive classification of lattice polygons contained in `[0,m]²`.
//!
//! Every polygon in the box arises from the box itself by repeatedly
//! removing one vertex and taking the hull of the remaining lattice points
//! ("shaving"); the normalized volume strictly decreases at each step, so a
//! breadth-first walk by descending volume visits each equivalence class
//! exactly once. Classes are deduplicated by canonical form, bucketed by
//! volume: a class is only ever discovered while a strictly larger volume is
//! being processed, so each bucket is complete before it opens and no global
//! seen-set is needed.

use alloc::vec::Vec;

use crate::error::Error;
use crate::ldp::minimum_box;
use crate::normal_form::{normal_form, NormalForm};
use crate::point::Point;
use crate::polygon::{box_polygon, Polygon};

/// Hull of the polygon's lattice points minus one vertex.
///
/// Fails with `Dimension` when the result is no longer two-dimensional,
/// which signals that this branch of the search is exhausted.
pub fn shave(p: &Polygon, v: Point) -> Result<Polygon, Error> {
    assert!(p.vertices().contains(&v), "shaved point must be a vertex");
    let remaining: Vec<Point> = p.lattice_points().into_iter().filter(|&q| q != v).collect();
    let shaved = Polygon::hull(&remaining)?;
    debug_assert!(shaved.normalized_volume() < p.normalized_volume());
    Ok(shaved)
}

/// Canonical keys of all two-dimensional shavings of `p`, deduplicated,
/// with their volumes.
pub fn shave_classes(p: &Polygon) -> Vec<(NormalForm, u64)> {
    let mut out: Vec<(NormalForm, u64)> = Vec::with_capacity(p.vertex_count());
    for &v in p.vertices() {
        if let Ok(shaved) = shave(p, v) {
            let vol = shaved.normalized_volume();
            let key = normal_form(&shaved);
            if !out.iter().any(|(k, _)| *k == key) {
                out.push((key, vol));
            }
        }
    }
    out
}

/// One classified equivalence class.
#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub key: NormalForm,
    /// Canonical representative: the lexicographically least placement into
    /// the smallest box that fits any member of the class.
    pub representative: Polygon,
    /// Size of that smallest box.
    pub min_box: u32,
    pub volume: u64,
    pub vertices: u32,
    pub lattice_points: u32,
}

/// Build the output entry for a class. Deterministic: depends only on the
/// equivalence class of the key.
pub fn class_entry(key: NormalForm) -> ClassEntry {
    let decoded = key.canonical_polygon();
    let min = minimum_box(&decoded);
    let representative = min
        .embeddings
        .first()
        .expect("minimum box always has an embedding")
        .1
        .clone();
    ClassEntry {
        volume: decoded.normalized_volume(),
        vertices: decoded.vertex_count() as u32,
        lattice_points: decoded.lattice_point_count() as u32,
        min_box: min.m,
        representative,
        key,
    }
}

/// Resource limits for the in-memory classifier.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyLimits {
    /// Hard cap on stored classes (found plus pending).
    pub max_classes: usize,
}

impl Default for ClassifyLimits {
    fn default() -> Self {
        // Comfortable for every box size up to 7 (about 1.25M classes).
        ClassifyLimits { max_classes: 4_000_000 }
    }
}

/// A completed classification run for one box size.
#[derive(Clone, Debug)]
pub struct Classification {
    pub box_size: u32,
    /// All classes with a member inside the box, sorted by canonical key.
    pub classes: Vec<ClassEntry>,
}

impl Classification {
    /// Entries whose minimal box is exactly `m`.
    pub fn exact(&self, m: u32) -> impl Iterator<Item = &ClassEntry> {
        self.classes.iter().filter(move |e| e.min_box == m)
    }
}

/// Classify every polygon contained in `[0,m]²` up to equivalence.
///
/// Single-threaded reference driver; the CLI crate runs the same expansion
/// with a worker pool. Output order is deterministic (sorted by key).
pub fn classify_box(m: u32, limits: &ClassifyLimits) -> Result<Classification, Error> {
    assert!(m >= 1);
    let top = box_polygon(m);
    let top_volume = top.normalized_volume() as usize;
    let mut buckets: Vec<Vec<NormalForm>> = alloc::vec![Vec::new(); top_volume + 1];
    buckets[top_volume].push(normal_form(&top));
    let mut stored = 1usize;
    let mut entries: Vec<ClassEntry> = Vec::new();
    for volume in (1..=top_volume).rev() {
        let mut bucket = core::mem::take(&mut buckets[volume]);
        if bucket.is_empty() {
            continue;
        }
        bucket.sort_unstable();
        bucket.dedup();
        for key in bucket {
            let polygon = key.canonical_polygon();
            for (child, child_vol) in shave_classes(&polygon) {
                debug_assert!((child_vol as usize) < volume);
                let slot = &mut buckets[child_vol as usize];
                if !slot.contains(&child) {
                    slot.push(child);
                    stored += 1;
                    if stored > limits.max_classes {
                        return Err(Error::Resource {
                            classes: stored,
                            budget: limits.max_classes,
                        });
                    }
                }
            }
            entries.push(class_entry(key));
        }
    }
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(Classification { box_size: m, classes: entries })
}

/// Table-style statistics for the classes of exact box size `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxStats {
    pub m: u32,
    pub count_exact: u64,
    pub max_vertices: u32,
    pub count_max_vertex: u64,
}

pub fn box_stats(run: &Classification, m: u32) -> BoxStats {
    let mut count = 0u64;
    let mut max_vertices = 0u32;
    let mut count_max = 0u64;
    for e in run.exact(m) {
        count += 1;
        match e.vertices.cmp(&max_vertices) {
            core::cmp::Ordering::Greater => {
                max_vertices = e.vertices;
                count_max = 1;
            }
            core::cmp::Ordering::Equal => count_max += 1,
            core::cmp::Ordering::Less => {}
        }
    }
    BoxStats { m, count_exact: count, max_vertices, count_max_vertex: count_max }
}

/// Canonical invariant of the cone spanned by the two primitive edge
/// directions at vertex `i`: the unimodular type `(e, c)` minimized over the
/// two direction orders.
pub fn vertex_cone_key(p: &Polygon, i: usize) -> (i64, i64) {
    let verts = p.vertices();
    let n = verts.len();
    let v = verts[i];
    let d_next = verts[(i + 1) % n].sub(v).primitive().expect("edge nonzero");
    let d_prev = verts[(i + n - 1) % n].sub(v).primitive().expect("edge nonzero");
    let mut best: Option<(i64, i64)> = None;
    for (d1, d2) in [(d_next, d_prev), (d_prev, d_next)] {
        let m = crate::normal_form::frame_key(d1, d2);
        if best.is_none_or(|b| m < b) {
            best = Some(m);
        }
    }
    best.expect("two orderings")
}

/// All vertex cones pairwise equivalent.
pub fn is_homogeneous(p: &Polygon) -> bool {
    let first = vertex_cone_key(p, 0);
    (1..p.vertex_count()).all(|i| vertex_cone_key(p, i) == first)
}

/// Max-vertex classes of exact box size `m`: the minimal-volume ones among
/// them, with homogeneity flags.
#[derive(Clone, Debug)]
pub struct MaxVertexSurvey {
    pub m: u32,
    pub max_vertices: u32,
    pub attainers: u64,
    pub min_volume: u64,
    /// Minimal-volume attainers with their homogeneity.
    pub minimal: Vec<(Polygon, bool)>,
}

pub fn max_vertex_survey(run: &Classification, m: u32) -> MaxVertexSurvey {
    let stats = box_stats(run, m);
    let mut min_volume = u64::MAX;
    for e in run.exact(m) {
        if e.vertices == stats.max_vertices {
            min_volume = min_volume.min(e.volume);
        }
    }
    let minimal: Vec<(Polygon, bool)> = run
        .exact(m)
        .filter(|e| e.vertices == stats.max_vertices && e.volume == min_volume)
        .map(|e| {
            let hom = is_homogeneous(&e.representative);
            (e.representative.clone(), hom)
        })
        .collect();
    MaxVertexSurvey {
        m,
        max_vertices: stats.max_vertices,
        attainers: stats.count_max_vertex,
        min_volume,
        minimal,
    }
}

/// Seed data shared with the out-of-crate parallel driver.
pub fn seed_class(m: u32) -> (NormalForm, u64) {
    let top = box_polygon(m);
    (normal_form(&top), top.normalized_volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::is_equivalent;
    use crate::unimodular::UnimodularMap;

    fn poly(list: &[(i64, i64)]) -> Polygon {
        let pts: Vec<Point> = list.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Polygon::hull(&pts).unwrap()
    }

    #[test]
    fn shave_unit_box() {
        let b1 = box_polygon(1);
        let shaved = shave(&b1, Point::new(1, 1)).unwrap();
        assert_eq!(shaved, poly(&[(0, 0), (1, 0), (0, 1)]));
        // Shaving a lattice triangle with only 3 points degenerates.
        assert_eq!(shave(&shaved, Point::new(0, 0)), Err(Error::Dimension));
    }

    #[test]
    fn shave_b2_corner() {
        let b2 = box_polygon(2);
        let shaved = shave(&b2, Point::new(2, 2)).unwrap();
        assert_eq!(
            shaved,
            poly(&[(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)])
        );
        assert_eq!(shaved.vertex_count(), 5);
    }

    #[test]
    fn classify_m1() {
        let run = classify_box(1, &ClassifyLimits::default()).unwrap();
        assert_eq!(run.classes.len(), 2);
        let stats = box_stats(&run, 1);
        assert_eq!(stats.count_exact, 2);
        assert_eq!(stats.max_vertices, 4);
        assert_eq!(stats.count_max_vertex, 1);
    }

    #[test]
    fn classify_m2() {
        let run = classify_box(2, &ClassifyLimits::default()).unwrap();
        assert_eq!(run.classes.len(), 17);
        let stats = box_stats(&run, 2);
        assert_eq!(stats.count_exact, 15);
        assert_eq!(stats.max_vertices, 6);
        assert_eq!(stats.count_max_vertex, 1);
        // The m = 1 classes are all here too.
        let sub = classify_box(1, &ClassifyLimits::default()).unwrap();
        for e in &sub.classes {
            assert!(run.classes.iter().any(|c| c.key == e.key));
        }
    }

    #[test]
    fn classify_m3() {
        let run = classify_box(3, &ClassifyLimits::default()).unwrap();
        assert_eq!(run.classes.len(), 148);
        let stats = box_stats(&run, 3);
        assert_eq!(stats.count_exact, 131);
        assert_eq!(stats.max_vertices, 8);
        assert_eq!(stats.count_max_vertex, 1);
    }

    #[test]
    fn volume_bounds_hold() {
        let run = classify_box(3, &ClassifyLimits::default()).unwrap();
        for e in &run.classes {
            assert!(e.volume >= 1 && e.volume <= 2 * 9);
            assert!(e.min_box <= 3);
            assert!(e.representative.bounding_square_size() == e.min_box);
        }
    }

    #[test]
    fn closure_under_shaving() {
        let run = classify_box(2, &ClassifyLimits::default()).unwrap();
        for e in &run.classes {
            for &v in e.representative.vertices() {
                match shave(&e.representative, v) {
                    Err(Error::Dimension) => {}
                    Err(other) => panic!("unexpected error {other:?}"),
                    Ok(shaved) => {
                        let key = normal_form(&shaved);
                        assert!(run.classes.iter().any(|c| c.key == key));
                    }
                }
            }
        }
    }

    #[test]
    fn resource_budget() {
        let limits = ClassifyLimits { max_classes: 10 };
        match classify_box(3, &limits) {
            Err(Error::Resource { .. }) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn homogeneity_examples() {
        for m in 1..=4 {
            assert!(is_homogeneous(&box_polygon(m)), "boxes are homogeneous");
        }
        assert!(is_homogeneous(&poly(&[(0, 0), (1, 0), (0, 1)])));
        assert!(!is_homogeneous(&poly(&[(0, 0), (2, 0), (0, 1)])));
    }

    #[test]
    fn cone_keys_by_exhaustive_matrix_search() {
        // Oracle: two cones are equivalent iff some small unimodular matrix
        // maps one direction pair onto the other (in either order).
        let cone_equiv = |a: (Point, Point), b: (Point, Point)| -> bool {
            let range = -6i64..=6;
            for m11 in range.clone() {
                for m12 in range.clone() {
                    for m21 in range.clone() {
                        for m22 in range.clone() {
                            let det = m11 * m22 - m12 * m21;
                            if det != 1 && det != -1 {
                                continue;
                            }
                            let map = UnimodularMap::linear(m11, m12, m21, m22).unwrap();
                            let (x, y) = (map.apply_vector(a.0), map.apply_vector(a.1));
                            if (x, y) == b || (y, x) == b {
                                return true;
                            }
                        }
                    }
                }
            }
            false
        };
        let tri = poly(&[(0, 0), (2, 0), (0, 1)]);
        let dirs = |p: &Polygon, i: usize| {
            let n = p.vertex_count();
            let v = p.vertices()[i];
            (
                p.vertices()[(i + 1) % n].sub(v).primitive().unwrap(),
                p.vertices()[(i + n - 1) % n].sub(v).primitive().unwrap(),
            )
        };
        for i in 0..3 {
            for j in 0..3 {
                let same_key = vertex_cone_key(&tri, i) == vertex_cone_key(&tri, j);
                let oracle = cone_equiv(dirs(&tri, i), dirs(&tri, j));
                assert_eq!(same_key, oracle, "vertices {i} and {j}");
            }
        }
    }

    #[test]
    fn max_vertex_survey_m1() {
        let run = classify_box(1, &ClassifyLimits::default()).unwrap();
        let survey = max_vertex_survey(&run, 1);
        assert_eq!(survey.max_vertices, 4);
        assert_eq!(survey.minimal.len(), 1);
        assert!(survey.minimal[0].1, "the unit box is homogeneous");
        assert!(is_equivalent(&survey.minimal[0].0, &box_polygon(1)));
    }
}
