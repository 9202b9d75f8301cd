//! Properties of the rate-region algebra and the gap measure.

mod common;

use irc_core::geometry::{bound_gap_per_dim, gap_per_dim, hull_union, Direction, RateRegion};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn region() -> impl Strategy<Value = RateRegion> {
    (any::<u64>(), 0.5f64..8.0).prop_map(|(seed, scale)| common::random_region(&mut ChaCha8Rng::seed_from_u64(seed), scale))
}

fn contained(a: &RateRegion, b: &RateRegion, tol: f64) -> bool {
    a.vertices().unwrap().into_iter().all(|v| b.contains(v, tol))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn support_matches_planes(r in region()) {
        let c = r.canonical();
        let mut active = false;
        for h in c.planes() {
            let m = r.max_weighted(h.a1(), h.a2()).unwrap();
            prop_assert!(m <= h.b + 1e-9);
            active |= (m - h.b).abs() <= 1e-9;
        }
        prop_assert!(active);
    }

    #[test]
    fn gap_zero_iff_contained(a in region(), b in region()) {
        let g = gap_per_dim(&a, &b).unwrap();
        prop_assert_eq!(g <= 1e-9, contained(&a, &b, 1e-9), "gap {}", g);
        prop_assert!(gap_per_dim(&a, &a).unwrap() <= 1e-12);
    }

    #[test]
    fn gap_monotone(a in region(), b in region(), c in region()) {
        // hull with c enlarges a; intersecting with c shrinks b
        let bigger = hull_union(&[a.clone(), c.clone()]).unwrap();
        let mut planes = b.planes().to_vec();
        planes.extend_from_slice(c.planes());
        let smaller = RateRegion::new(planes).unwrap();
        let g = gap_per_dim(&a, &b).unwrap();
        prop_assert!(gap_per_dim(&bigger, &b).unwrap() >= g - 1e-9);
        prop_assert!(gap_per_dim(&a, &smaller).unwrap() >= g - 1e-9);
    }

    #[test]
    fn gap_shift_lands_inside(a in region(), b in region()) {
        let g = gap_per_dim(&a, &b).unwrap();
        for (x, y) in a.vertices().unwrap() {
            prop_assert!(b.contains(((x - g).max(0.0), (y - g).max(0.0)), 1e-9));
        }
    }

    #[test]
    fn unclipped_gap_never_larger(a in region(), b in region()) {
        let raw: Vec<(Direction, f64)> = b.planes().iter().map(|h| (h.dir, h.b)).collect();
        prop_assert!(bound_gap_per_dim(&a, &raw).unwrap() <= gap_per_dim(&a, &b).unwrap() + 1e-9);
    }

    #[test]
    fn hull_contains_members(a in region(), b in region()) {
        let h = hull_union(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(contained(&a, &h, 1e-9) && contained(&b, &h, 1e-9));
    }

    #[test]
    fn canonical_keeps_one_plane_per_direction(a in region()) {
        let c = a.canonical();
        let mut dirs: Vec<_> = c.planes().iter().map(|h| h.dir).collect();
        let n = dirs.len();
        dirs.sort_by_key(|d| d.label());
        dirs.dedup();
        prop_assert_eq!(dirs.len(), n);
        prop_assert!(contained(&a, &c, 1e-12) && contained(&c, &a, 1e-12));
    }
}

#[test]
fn squares_differ_by_one() {
    let big = RateRegion::from_bounds([(Direction::R1, 2.0), (Direction::R2, 2.0)]).unwrap();
    let small = RateRegion::from_bounds([(Direction::R1, 1.0), (Direction::R2, 1.0)]).unwrap();
    assert!((gap_per_dim(&big, &small).unwrap() - 1.0).abs() < 1e-12);
}
