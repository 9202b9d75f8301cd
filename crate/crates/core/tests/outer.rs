//! Properties of the outer bounds.

use irc_core::outer::{cor1_bounds, outer_region_cor1, outer_region_thm1_max, thm1_bounds, OuterConfig};
use irc_core::ChannelSnr;
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = ChannelSnr> {
    (prop::array::uniform7(-20.0f64..40.0), any::<bool>()).prop_map(|(db, p)| ChannelSnr::from_db(db, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_dominates_every_correlation(ch in channel()) {
        let c1 = cor1_bounds(&ch);
        prop_assert!(c1.iter().all(|b| b.is_finite() && *b >= 0.0));
        for rho in OuterConfig::uniform(41).unwrap().rho_grid {
            let t = thm1_bounds(&ch, rho).unwrap();
            for (k, (a, b)) in t.iter().zip(&c1).enumerate() {
                prop_assert!(a <= &(b + 1e-9), "bound {k} at rho {rho}: {a} > {b}");
            }
        }
    }

    #[test]
    fn union_over_correlations_inside_closed_form(ch in channel()) {
        let cfg = OuterConfig::uniform(21).unwrap();
        let thm = outer_region_thm1_max(&ch, &cfg).unwrap();
        let cor = outer_region_cor1(&ch);
        for v in thm.vertices().unwrap() {
            prop_assert!(cor.contains(v, 1e-9), "{v:?}");
        }
    }

    #[test]
    fn single_rate_bounds_grow_with_numerator_snrs(ch in channel(), k in 0usize..7, bump in 0.0f64..100.0) {
        let mut s = ch.as_array();
        // the three single-rate bounds depend on s11, s13, s22 and s31 only through numerators
        prop_assume!([0usize, 2, 4, 6].contains(&k));
        s[k] += bump;
        let up = ChannelSnr::new(s, ch.sign_parity).unwrap();
        let (a, b) = (cor1_bounds(&ch), cor1_bounds(&up));
        for i in 0..3 {
            prop_assert!(b[i] >= a[i] - 1e-12);
        }
    }
}

#[test]
fn all_zero_snrs_leave_the_slack_constants() {
    let ch = ChannelSnr::new([0.0; 7], true).unwrap();
    let b = cor1_bounds(&ch);
    assert_eq!(b[0], 0.0);
    assert_eq!(b[1], 0.5);
    assert_eq!(b[2], 0.0);
}

#[test]
fn delta_with_even_parity() {
    let ch = ChannelSnr::new([100.0, 0.0, 6.3096, 6.3096, 0.0, 100.0, 0.0], true).unwrap();
    assert!((ch.delta() - (100.0f64 - 6.3096).powi(2)).abs() < 1e-9);
}
