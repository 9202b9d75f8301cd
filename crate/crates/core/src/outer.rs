//! Outer bounds on the capacity region.
//!
//! [`thm1_bounds`] evaluates twenty genie-aided bounds for jointly Gaussian
//! inputs with correlation `rho` between the first source and the relay; the
//! true outer bound is the union over `rho`. [`cor1_bounds`] gives the
//! closed-form relaxation obtained with uncorrelated inputs plus a slack of
//! 1/2 or 1 bit on the bounds whose maximizer is not `rho = 0`. Both lists
//! share the same bound ordering, so entry `i` of one relaxes entry `i` of
//! the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{build_system, c, ChannelSnr, GaussianSystem};
use crate::geometry::{hull_union, Direction, RateRegion};

/// Number of bounds in either outer-bound family.
pub const N_OUTER: usize = 20;

/// Plane direction of each of the twenty bounds.
pub const OUTER_DIRECTIONS: [Direction; N_OUTER] = {
    use Direction::*;
    [
        R1, R1, R2, Sum, Sum, Sum, Sum, Sum, Sum, Sum, Sum, TwoR1R2, TwoR1R2, TwoR1R2, TwoR1R2, TwoR1R2,
        TwoR1R2, R1TwoR2, R1TwoR2, R1TwoR2,
    ]
};

/// Grid of correlation values for the union over `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterConfig {
    pub rho_grid: Vec<f64>,
}

impl Default for OuterConfig {
    fn default() -> Self {
        Self::uniform(201).expect("default grid is valid")
    }
}

impl OuterConfig {
    /// `n` equally spaced points covering `[-1, 1]`.
    pub fn uniform(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::Config("rho grid must be nonempty".into())),
            1 => Ok(Self { rho_grid: vec![0.0] }),
            _ => Ok(Self { rho_grid: (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect() }),
        }
    }

    pub fn new(rho_grid: Vec<f64>) -> Result<Self> {
        let cfg = Self { rho_grid };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho_grid.is_empty() {
            return Err(Error::Config("rho grid must be nonempty".into()));
        }
        if self.rho_grid.iter().any(|r| !(r.abs() <= 1.0)) {
            return Err(Error::Config("rho grid values must lie in [-1, 1]".into()));
        }
        if self.rho_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("rho grid must be sorted".into()));
        }
        Ok(())
    }
}

/// Right-hand sides of the closed-form outer bound, in bits.
pub fn cor1_bounds(ch: &ChannelSnr) -> [f64; N_OUTER] {
    let ChannelSnr { s11, s12, s13, s21, s22, s23, s31, .. } = *ch;
    let d = ch.delta();

    // recurring single-user terms
    let direct = c((s11 + s13 + d) / (1.0 + s21 + s23));
    let y2_all = c(s21 + s22 + s23);
    let y2_given_v2 = c(s21 + s23 + s22 / (1.0 + s12));
    let y1_all = c(s11 + s12 + s13);
    let x2_private = c(s22 / (1.0 + s12));
    let relay_v1 = c((s11 + s31) / (1.0 + s21));
    let y1y3 = c(s11 + s12 + s31 * (1.0 + s12));
    let relay_vec_v1 = c((s11 + s31) / (1.0 + s21 + s31));
    let y2y3_given_v2 = c(s21 + s31 + s22 * (1.0 + s31) / (1.0 + s12));
    let y2y3 = c(s21 + s22 + s31 * (1.0 + s22));

    [
        c(s11 + s31),
        c(s11 + s13) + 0.5,
        c(s22),
        direct + y2_all + 0.5,
        c(s12 + (s11 + s13 + d) / (1.0 + s21 + s23)) + y2_given_v2 + 0.5,
        y1_all + x2_private + 0.5,
        relay_v1 + y2_all + 0.5,
        c(s12 + (s11 + s31 * (1.0 + s12)) / (1.0 + s21)) + y2_given_v2 + 0.5,
        y1y3 + x2_private,
        relay_vec_v1 + y2y3,
        c(s12 + (s11 + s31 * (1.0 + s12)) / (1.0 + s21 + s31)) + y2y3_given_v2,
        direct + y2_given_v2 + y1_all + 1.0,
        direct + y2_given_v2 + y1y3 + 0.5,
        relay_v1 + y1_all + y2_given_v2 + 1.0,
        relay_v1 + y1y3 + y2_given_v2 + 0.5,
        relay_vec_v1 + y1_all + y2y3_given_v2 + 0.5,
        relay_vec_v1 + y1y3 + y2y3_given_v2,
        c(s12 + (s11 + s13 + d) / (1.0 + s21 + s23)) + x2_private + y2_all + 0.5,
        c(s12 + (s11 + s31 * (1.0 + s12)) / (1.0 + s21)) + x2_private + y2_all + 0.5,
        c(s12 + (s11 + s31 * (1.0 + s12)) / (1.0 + s21 + s31)) + x2_private + y2y3,
    ]
}

/// Closed-form outer region with all twenty planes kept.
pub fn outer_region_cor1(ch: &ChannelSnr) -> RateRegion {
    RateRegion::from_bounds(OUTER_DIRECTIONS.into_iter().zip(cor1_bounds(ch))).expect("closed-form bounds are finite")
}

/// The sixteen distinct mutual-information terms of the genie-aided bound.
struct Thm1Terms {
    t: [f64; 16],
}

impl Thm1Terms {
    fn eval(sys: &GaussianSystem) -> Result<Self> {
        // (a, b, c) label sets; "V1V3" is the vector genie signal
        const TERMS: [(&[&str], &[&str], &[&str]); 16] = [
            (&["X1"], &["Y1", "Y3"], &["X2", "X3"]),
            (&["X1", "X3"], &["Y1"], &["X2"]),
            (&["X2"], &["Y2"], &["X1", "X3"]),
            (&["X1", "X3"], &["Y1"], &["V1", "X2"]),
            (&["X1", "X2", "X3"], &["Y2"], &[]),
            (&["X1", "X2", "X3"], &["Y1"], &["V1"]),
            (&["X1", "X2", "X3"], &["Y2"], &["V2"]),
            (&["X1", "X2", "X3"], &["Y1"], &[]),
            (&["X2"], &["Y2"], &["X1", "V2", "X3"]),
            (&["X1"], &["Y1", "Y3"], &["V1", "X2", "X3"]),
            (&["X1", "X2"], &["Y1", "Y3"], &["V1", "X3"]),
            (&["X1", "X2"], &["Y1", "Y3"], &["X3"]),
            (&["X1"], &["Y1", "Y3"], &["V1", "V3", "X2", "X3"]),
            (&["X1", "X2"], &["Y2", "Y3"], &["X3"]),
            (&["X1", "X2"], &["Y1", "Y3"], &["V1", "V3", "X3"]),
            (&["X1", "X2"], &["Y2", "Y3"], &["V2", "X3"]),
        ];
        let mut t = [0.0; 16];
        for (slot, (a, b, cc)) in t.iter_mut().zip(TERMS) {
            *slot = sys.mutual_info(a, b, cc)?;
        }
        Ok(Self { t })
    }

    fn bounds(&self) -> [f64; N_OUTER] {
        let t = &self.t;
        [
            t[0],
            t[1],
            t[2],
            t[3] + t[4],
            t[5] + t[6],
            t[7] + t[8],
            t[9] + t[4],
            t[10] + t[6],
            t[11] + t[8],
            t[12] + t[13],
            t[14] + t[15],
            t[3] + t[7] + t[6],
            t[3] + t[11] + t[6],
            t[9] + t[7] + t[6],
            t[9] + t[11] + t[6],
            t[12] + t[7] + t[15],
            t[12] + t[11] + t[15],
            t[5] + t[8] + t[4],
            t[10] + t[8] + t[4],
            t[14] + t[8] + t[13],
        ]
    }
}

/// Right-hand sides of the genie-aided bound at correlation `rho`, each
/// evaluated by the generic Gaussian evaluator.
pub fn thm1_bounds(ch: &ChannelSnr, rho: f64) -> Result<[f64; N_OUTER]> {
    let sys = build_system(ch, rho)?;
    Ok(Thm1Terms::eval(&sys)?.bounds())
}

/// The sixteen distinct mutual-information terms at correlation `rho`, in
/// the order `I(X1;Y1Y3|X2X3)`, `I(X1X3;Y1|X2)`, `I(X2;Y2|X1X3)`,
/// `I(X1X3;Y1|V1X2)`, `I(X1X2X3;Y2)`, `I(X1X2X3;Y1|V1)`, `I(X1X2X3;Y2|V2)`,
/// `I(X1X2X3;Y1)`, `I(X2;Y2|X1V2X3)`, `I(X1;Y1Y3|V1X2X3)`,
/// `I(X1X2;Y1Y3|V1X3)`, `I(X1X2;Y1Y3|X3)`, `I(X1;Y1Y3|V1V3X2X3)`,
/// `I(X1X2;Y2Y3|X3)`, `I(X1X2;Y1Y3|V1V3X3)`, `I(X1X2;Y2Y3|V2X3)`.
pub fn thm1_terms(ch: &ChannelSnr, rho: f64) -> Result<[f64; 16]> {
    let sys = build_system(ch, rho)?;
    Ok(Thm1Terms::eval(&sys)?.t)
}

pub fn outer_region_thm1(ch: &ChannelSnr, rho: f64) -> Result<RateRegion> {
    RateRegion::from_bounds(OUTER_DIRECTIONS.into_iter().zip(thm1_bounds(ch, rho)?))
}

/// Hull of the union of the genie-aided regions over the configured grid.
pub fn outer_region_thm1_max(ch: &ChannelSnr, cfg: &OuterConfig) -> Result<RateRegion> {
    cfg.validate()?;
    let regions = cfg.rho_grid.iter().map(|&rho| outer_region_thm1(ch, rho)).collect::<Result<Vec<_>>>()?;
    hull_union(&regions)
}

// --- decorrelation check ---

/// Lower bound `gamma_*` on `det(V Vᵀ)` given the row imbalances.
pub fn gamma_star(alpha1: f64, alpha2: f64) -> f64 {
    let v = 0.5 * (1.0 - alpha1 * alpha2) - 0.5 * ((1.0 - alpha1 * alpha1) * (1.0 - alpha2 * alpha2)).max(0.0).sqrt();
    v.max(0.0)
}

/// `sup_{G >= 0} (a0 + a1 G + a2 G²) / ((1 + b1 G)(1 + b2 G))`, the ratio
/// of correlated to uncorrelated sum-rate arguments in the worst case
/// `gamma = gamma_*`.
pub fn decorr_objective_sup(alpha1: f64, alpha2: f64, rho: f64) -> f64 {
    let g = gamma_star(alpha1, alpha2);
    let w = 1.0 - rho * rho;
    let a0 = 1.0 + alpha1 * rho;
    let a1 = 1.0 + alpha1 * rho + g * w;
    let a2 = g * w;
    let b1 = g;
    let b2 = 1.0 + alpha2 * rho;
    let f = |x: f64| (a0 + a1 * x + a2 * x * x) / ((1.0 + b1 * x) * (1.0 + b2 * x));

    let s = b1 + b2;
    let p = b1 * b2;
    let mut best = f(0.0);
    let at_inf = if p > 0.0 {
        a2 / p
    } else if a2 > 0.0 {
        f64::INFINITY
    } else if b2 > 0.0 {
        a1 / b2
    } else {
        f64::INFINITY
    };
    best = best.max(at_inf);

    // stationary points: (a2 s - a1 p) x² + 2 (a2 - a0 p) x + (a1 - a0 s) = 0
    let qa = a2 * s - a1 * p;
    let qb = 2.0 * (a2 - a0 * p);
    let qc = a1 - a0 * s;
    let mut roots = Vec::with_capacity(2);
    if qa.abs() < 1e-15 {
        if qb.abs() > 1e-15 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb + sq) / (2.0 * qa));
            roots.push((-qb - sq) / (2.0 * qa));
        }
    }
    for x in roots {
        if x >= 0.0 && x.is_finite() {
            best = best.max(f(x));
        }
    }
    best
}

/// Supremum of [`decorr_objective_sup`] over an interior grid of the set
/// `alpha1, alpha2 in (-1, 1)`, `rho in (0, 1)`, `alpha1 > alpha2`,
/// `alpha1 > -rho`, with `grid_density` points per axis.
pub fn decorr_ratio_check(grid_density: usize) -> Result<f64> {
    if grid_density < 10 {
        return Err(Error::Config(format!("grid density must be at least 10, got {grid_density}")));
    }
    let n = grid_density;
    let alpha = |i: usize| -1.0 + 2.0 * (i + 1) as f64 / (n + 1) as f64;
    let rho = |i: usize| (i + 1) as f64 / (n + 1) as f64;
    let mut sup = f64::NEG_INFINITY;
    for i in 0..n {
        let a1 = alpha(i);
        for j in 0..n {
            let a2 = alpha(j);
            if a1 <= a2 {
                continue;
            }
            for k in 0..n {
                let r = rho(k);
                if a1 <= -r {
                    continue;
                }
                sup = sup.max(decorr_objective_sup(a1, a2, r));
            }
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::cap;

    fn reference(s31_db: f64) -> ChannelSnr {
        ChannelSnr::from_db([20.0, 8.0, 20.0, 8.0, 20.0, 20.0, s31_db], true).unwrap()
    }

    #[test]
    fn cor1_examples() {
        let ch = ChannelSnr::new([100.0, 0.0, 0.0, 0.0, 0.0, 0.0, 100.0], true).unwrap();
        // 1/2 log2(201)
        assert!((cor1_bounds(&ch)[0] - 3.825_525_845_589_464).abs() < 1e-9);

        let zero = ChannelSnr::new([0.0; 7], true).unwrap();
        let b = cor1_bounds(&zero);
        assert_eq!(b[0], 0.0);
        assert_eq!(b[1], 0.5);
        assert_eq!(b[2], 0.0);
        let r = outer_region_cor1(&zero);
        assert_eq!(r.planes().len(), 20);
        assert_eq!(r.vertices().unwrap(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn thm1_examples() {
        let ch = reference(10.0);
        let b0 = thm1_bounds(&ch, 0.0).unwrap();
        assert!((b0[2] - cap(ch.s22).unwrap()).abs() < 1e-9);
        assert!((b0[0] - cap(ch.s11 + ch.s31).unwrap()).abs() < 1e-9);
        let b1 = thm1_bounds(&ch, 1.0).unwrap();
        assert!(b1[0].abs() < 1e-9);
    }

    #[test]
    fn thm1_at_zero_matches_closed_form_without_slack() {
        // at rho = 0 every genie-aided bound equals its closed form minus the slack
        let slack = [0.0, 0.5, 0.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 1.0, 0.5, 1.0, 0.5, 0.5, 0.0, 0.5, 0.5, 0.0];
        for parity in [true, false] {
            let ch = ChannelSnr::new([3.0, 0.7, 12.0, 5.0, 40.0, 2.0, 9.0], parity).unwrap();
            let thm = thm1_bounds(&ch, 0.0).unwrap();
            let cor = cor1_bounds(&ch);
            for i in 0..N_OUTER {
                assert!((cor[i] - slack[i] - thm[i]).abs() < 1e-9, "bound {i}: {} vs {}", cor[i] - slack[i], thm[i]);
            }
        }
    }

    #[test]
    fn singleton_grid() {
        let ch = reference(5.0);
        let cfg = OuterConfig::new(vec![0.0]).unwrap();
        let a = outer_region_thm1_max(&ch, &cfg).unwrap();
        let b = outer_region_thm1(&ch, 0.0).unwrap();
        let (sa, sb) = (a.support().unwrap(), b.support().unwrap());
        for (x, y) in sa.iter().zip(sb) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_flip_acts_per_receiver() {
        // terms seeing only receiver 1 ignore the parity; terms seeing only
        // receiver 2 trade a parity flip for a sign flip of rho
        const RX1: [usize; 4] = [0, 1, 7, 11];
        const RX2: [usize; 6] = [2, 4, 6, 8, 13, 15];
        let ch = ChannelSnr::new([3.0, 0.7, 12.0, 5.0, 40.0, 2.0, 9.0], true).unwrap();
        let flipped = ch.with_parity(false);
        for rho in [-0.7, -0.2, 0.0, 0.4, 0.9] {
            let a = thm1_terms(&ch, rho).unwrap();
            let same = thm1_terms(&flipped, rho).unwrap();
            let mirrored = thm1_terms(&flipped, -rho).unwrap();
            for i in RX1 {
                assert!((a[i] - same[i]).abs() < 1e-9, "{i} {rho}");
            }
            for i in RX2 {
                assert!((a[i] - mirrored[i]).abs() < 1e-9, "{i} {rho}");
            }
        }
    }

    #[test]
    fn decorr_examples() {
        assert_eq!(gamma_star(0.3, 0.3), 0.0);
        assert!((decorr_objective_sup(0.5, -0.2, 1e-9) - 1.0).abs() < 1e-6);
        let sup = decorr_ratio_check(20).unwrap();
        assert!((1.0..=2.0 + 1e-3).contains(&sup), "{sup}");
        assert!(decorr_ratio_check(5).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(OuterConfig::new(vec![]).is_err());
        assert!(OuterConfig::new(vec![0.5, 0.1]).is_err());
        assert!(OuterConfig::new(vec![-1.5]).is_err());
        assert_eq!(OuterConfig::default().rho_grid.len(), 201);
    }
}
