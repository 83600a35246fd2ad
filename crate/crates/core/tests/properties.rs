//! Property tests for the geometric core: invariance under unimodular maps,
//! exact counting identities, and the distance-bound chain.

use proptest::prelude::*;
use toricode_core::classify::shave_classes;
use toricode_core::code::generator_matrix;
use toricode_core::dist::{exact_min_distance, row_combo_bound, verify_witness};
use toricode_core::gf::Field;
use toricode_core::ldp::minimum_box;
use toricode_core::normal_form::{is_equivalent, normal_form};
use toricode_core::{Point, Polygon, UnimodularMap};

fn arb_point(range: i64) -> impl Strategy<Value = Point> {
    (-range..=range, -range..=range).prop_map(|(x, y)| Point::new(x, y))
}

/// Hulls of small random point sets, discarded when degenerate.
fn arb_polygon() -> impl Strategy<Value = Polygon> {
    proptest::collection::vec(arb_point(6), 3..9)
        .prop_filter_map("degenerate", |pts| Polygon::hull(&pts).ok())
}

/// Products of elementary unimodular matrices with a small translation.
fn arb_map() -> impl Strategy<Value = UnimodularMap> {
    (
        proptest::collection::vec((0u8..4, -3i64..=3), 1..5),
        arb_point(20),
    )
        .prop_map(|(steps, t)| {
            let mut m = UnimodularMap::identity();
            for (kind, a) in steps {
                let next = match kind {
                    0 => UnimodularMap::linear(1, a, 0, 1),
                    1 => UnimodularMap::linear(1, 0, a, 1),
                    2 => UnimodularMap::linear(0, 1, 1, 0),
                    _ => UnimodularMap::linear(-1, 0, 0, 1),
                }
                .expect("elementary maps are unimodular");
                m = next.compose(&m);
            }
            UnimodularMap::translation(t).compose(&m)
        })
}

proptest! {
    #[test]
    fn map_preserves_invariants(p in arb_polygon(), m in arb_map()) {
        let q = m.apply(&p);
        prop_assert_eq!(p.normalized_volume(), q.normalized_volume());
        prop_assert_eq!(p.vertex_count(), q.vertex_count());
        prop_assert_eq!(p.lattice_point_count(), q.lattice_point_count());
    }

    #[test]
    fn normal_form_is_map_invariant(p in arb_polygon(), m in arb_map()) {
        prop_assert_eq!(normal_form(&p), normal_form(&m.apply(&p)));
        prop_assert!(is_equivalent(&p, &m.apply(&p)));
    }

    #[test]
    fn pick_identity(p in arb_polygon()) {
        let b = p.boundary_point_count();
        let total = p.lattice_points().len() as u64;
        prop_assert_eq!(p.lattice_point_count(), total);
        prop_assert_eq!(p.normalized_volume(), 2 * (total - b) + b - 2);
    }

    #[test]
    fn width_transposes_under_maps(p in arb_polygon(), m in arb_map(), u in arb_point(4)) {
        prop_assume!(!u.is_zero());
        let ut = m.transpose_linear().apply_vector(u);
        prop_assert_eq!(
            m.apply(&p).width_along(u).unwrap(),
            p.width_along(ut).unwrap()
        );
    }

    #[test]
    fn width_is_symmetric_and_translation_invariant(p in arb_polygon(), u in arb_point(4), t in arb_point(30)) {
        prop_assume!(!u.is_zero());
        prop_assert_eq!(p.width_along(u).unwrap(), p.width_along(u.neg()).unwrap());
        prop_assert_eq!(
            p.width_along(u).unwrap(),
            p.translate(t).width_along(u).unwrap()
        );
    }

    #[test]
    fn minimum_box_is_class_invariant(p in arb_polygon(), m in arb_map()) {
        let a = minimum_box(&p);
        let b = minimum_box(&m.apply(&p));
        prop_assert_eq!(a.m, b.m);
        // Embedded images agree as sets of placements.
        let imgs_a: Vec<_> = a.embeddings.iter().map(|(_, q)| q.clone()).collect();
        let imgs_b: Vec<_> = b.embeddings.iter().map(|(_, q)| q.clone()).collect();
        prop_assert_eq!(imgs_a, imgs_b);
    }

    #[test]
    fn shaving_strictly_decreases_volume(p in arb_polygon()) {
        for (key, vol) in shave_classes(&p) {
            prop_assert!(vol < p.normalized_volume());
            prop_assert_eq!(key.canonical_polygon().normalized_volume(), vol);
        }
    }

    #[test]
    fn bound_chain_on_small_codes(
        pts in proptest::collection::vec((0i64..=3, 0i64..=3).prop_map(|(x, y)| Point::new(x, y)), 3..7),
    ) {
        let Ok(p) = Polygon::hull(&pts) else { return Ok(()) };
        let min = minimum_box(&p);
        let embedded = &min.embeddings[0].1;
        prop_assume!(embedded.lattice_point_count() <= 7);
        let f = Field::new(5).unwrap();
        let g = generator_matrix(embedded, &f).unwrap();
        let d = exact_min_distance(&g, &f, 1 << 24).unwrap();
        prop_assert!(verify_witness(&g, &f, &d.witness, d.value));
        let mut prev = u32::MAX;
        for r in 1..=g.k() as u32 {
            let db = row_combo_bound(&g, &f, r).value;
            prop_assert!(db <= prev);
            prop_assert!(d.value <= db);
            prev = db;
        }
        prop_assert_eq!(prev, d.value);
    }

    #[test]
    fn equivalence_is_consistent_with_keys(a in arb_polygon(), b in arb_polygon()) {
        prop_assert_eq!(is_equivalent(&a, &b), normal_form(&a) == normal_form(&b));
    }
}
