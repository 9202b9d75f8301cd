//! Compress-and-forward inner bound and the relay-free Han-Kobayashi baseline.
//!
//! The relay adds independent Gaussian noise of variance `N` to its
//! observation and forwards the compression index. Sources split power
//! between a common layer and a private layer with the fixed rule
//! `ab1 (1 + s21 + s31/(1+N)) = 1`, `ab2 (1 + s12) = 1` (`ab` = private share).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{c, half_log2, ChannelSnr};
use crate::geometry::{hull_union, Direction, RateRegion};

/// Compression noise minimizing [`cf_gap_objective`] to three decimals.
pub const DEFAULT_CF_NOISE: f64 = 1.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfConfig {
    pub n_compress: f64,
}

impl Default for CfConfig {
    fn default() -> Self {
        CfConfig { n_compress: DEFAULT_CF_NOISE }
    }
}

impl CfConfig {
    pub fn new(n_compress: f64) -> Result<Self> {
        if !(n_compress.is_finite() && n_compress > 0.0) {
            return Err(Error::Domain(format!("compression noise must be finite and > 0, got {n_compress}")));
        }
        Ok(CfConfig { n_compress })
    }
}

/// Private power shares `(ab1, ab2)` for compression noise `n`.
///
/// `n = f64::INFINITY` gives the relay-ignoring split used by the baseline.
pub fn power_split(ch: &ChannelSnr, n: f64) -> (f64, f64) {
    let relay = if n.is_infinite() { 0.0 } else { ch.s31 / (1.0 + n) };
    (1.0 / (1.0 + ch.s21 + relay), 1.0 / (1.0 + ch.s12))
}

/// The sixteen rate terms `I_ki` (with the relay) and `I'_ki` (relay ignored).
///
/// Index `[k][i]` holds destination `k + 1`, term `i + 1`. Terms are:
/// 1. private message alone, 2. own message, 3. private plus the interfering
/// common layer, 4. own message plus the interfering common layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfTerms {
    pub i: [[f64; 4]; 2],
    pub ip: [[f64; 4]; 2],
}

/// Evaluates the closed forms for given power shares.
pub fn cf_terms_with_split(ch: &ChannelSnr, n: f64, ab1: f64, ab2: f64) -> CfTerms {
    let ChannelSnr { s11, s12, s13, s21, s22, s23, s31, .. } = *ch;
    let np1 = 1.0 + n;
    let mut i = [[0.0; 4]; 2];
    let mut ip = [[0.0; 4]; 2];

    // destination 1: (own share, interferer share) per term
    let d1 = np1 * (1.0 + ab2 * s12);
    let d1p = 1.0 + ab2 * s12;
    for (t, &(a, b)) in [(ab1, ab2), (1.0, ab2), (ab1, 1.0), (1.0, 1.0)].iter().enumerate() {
        let y = 1.0 + a * s11 + b * s12;
        let joint = (np1 * y + a * s31 * (1.0 + b * s12)) / d1;
        let via_relay = n * (y + s13) / d1;
        i[0][t] = half_log2(joint.min(via_relay)).max(0.0);
        ip[0][t] = half_log2(y / d1p).max(0.0);
    }

    // destination 2: the relay observes the interferer here
    let d2 = np1 * (1.0 + ab1 * s21) + ab1 * s31;
    let d2p = 1.0 + ab1 * s21;
    for (t, &(a, b)) in [(ab1, ab2), (ab1, 1.0), (1.0, ab2), (1.0, 1.0)].iter().enumerate() {
        let y = 1.0 + a * s21 + b * s22;
        let joint = (np1 * y + a * s31 * (1.0 + b * s22)) / d2;
        let via_relay = n * (y + s23) / d2;
        i[1][t] = half_log2(joint.min(via_relay)).max(0.0);
        ip[1][t] = half_log2(y / d2p).max(0.0);
    }
    CfTerms { i, ip }
}

pub fn cf_terms(ch: &ChannelSnr, cfg: &CfConfig) -> CfTerms {
    let (ab1, ab2) = power_split(ch, cfg.n_compress);
    cf_terms_with_split(ch, cfg.n_compress, ab1, ab2)
}

// ---

/// Maps a destination-indexed bound to the rate-plane vocabulary.
fn dir(k: usize, wk: u32, wj: u32) -> Direction {
    let (a1, a2) = if k == 0 { (wk, wj) } else { (wj, wk) };
    Direction::from_coeffs(a1, a2).expect("CF bounds use the five plane families")
}

/// Both destinations decode the compression index (or, with `ip` for both,
/// neither does).
fn joint_decode_bounds(ik: &[[f64; 4]; 2], out: &mut Vec<(Direction, f64)>) {
    for k in 0..2 {
        let j = 1 - k;
        out.push((dir(k, 1, 0), ik[k][1]));
        out.push((dir(k, 1, 1), ik[k][0] + ik[j][3]));
        out.push((dir(k, 1, 1), ik[k][2] + ik[j][2]));
        out.push((dir(k, 2, 1), ik[k][0] + ik[k][3] + ik[j][2]));
    }
}

/// Sub-region where every destination decodes the compression index.
pub fn cf0_region(t: &CfTerms) -> RateRegion {
    let mut b = Vec::new();
    joint_decode_bounds(&t.i, &mut b);
    RateRegion::from_bounds(b).expect("finite CF terms")
}

/// Sub-region where only destination `k` (0 or 1) decodes the compression
/// index and the other treats the relay as absent.
pub fn cf_single_region(t: &CfTerms, k: usize) -> RateRegion {
    assert!(k < 2);
    let j = 1 - k;
    let (a, p) = (&t.i[k], &t.ip[j]);
    let b = vec![
        (dir(k, 1, 0), a[1]),
        (dir(j, 1, 0), p[1]),
        (dir(k, 1, 1), a[0] + p[3]),
        (dir(k, 1, 1), a[3] + p[0]),
        (dir(k, 1, 1), a[2] + p[2]),
        (dir(k, 2, 1), a[0] + a[3] + p[2]),
        (dir(k, 1, 2), a[2] + p[0] + p[3]),
    ];
    RateRegion::from_bounds(b).expect("finite CF terms")
}

/// The three sub-regions in order: joint decoding, only 1 decodes, only 2.
pub fn cf_subregions_from_terms(t: &CfTerms) -> [RateRegion; 3] {
    [cf0_region(t), cf_single_region(t, 0), cf_single_region(t, 1)]
}

pub fn cf_region_from_terms(t: &CfTerms) -> RateRegion {
    hull_union(&cf_subregions_from_terms(t)).expect("CF sub-regions contain the origin")
}

pub fn cf_region(ch: &ChannelSnr, cfg: &CfConfig) -> RateRegion {
    cf_region_from_terms(&cf_terms(ch, cfg))
}

/// Relay-free terms with the relay-ignoring power split.
pub fn hk_terms(ch: &ChannelSnr) -> [[f64; 4]; 2] {
    let (ab1, ab2) = power_split(ch, f64::INFINITY);
    // the compression noise only enters the relay-aided terms
    cf_terms_with_split(ch, 1.0, ab1, ab2).ip
}

/// Region built from relay-free terms with the joint-decoding pattern.
pub fn hk_region_from_terms(ip: &[[f64; 4]; 2]) -> RateRegion {
    let mut b = Vec::new();
    joint_decode_bounds(ip, &mut b);
    RateRegion::from_bounds(b).expect("finite HK terms")
}

/// Han-Kobayashi region of the interference channel without the relay.
pub fn hk_region(ch: &ChannelSnr) -> RateRegion {
    hk_region_from_terms(&hk_terms(ch))
}

/// Worst-case CF gap per dimension as a function of the compression noise.
pub fn cf_gap_objective(n: f64) -> Result<f64> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!("compression noise must be finite and > 0, got {n}")));
    }
    let inv = c(1.0 / n);
    let a = c(n) + c((1.0 + 2.0 * n) / (2.0 + n));
    Ok((1.0 + inv + a.max(1.0 + inv)) / 2.0)
}

/// Grid minimizer of [`cf_gap_objective`] over `[lo, hi]` with spacing `step`.
pub fn cf_gap_argmin(lo: f64, hi: f64, step: f64) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi >= lo && step > 0.0) {
        return Err(Error::Domain("need 0 < lo <= hi and step > 0".into()));
    }
    let n_steps = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut best = (lo, f64::INFINITY);
    for s in 0..=n_steps {
        let n = lo + s as f64 * step;
        let g = cf_gap_objective(n)?;
        if g < best.1 {
            best = (n, g);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::cap;

    fn reference(s31_db: f64) -> ChannelSnr {
        ChannelSnr::from_db([20.0, 8.0, 20.0, 8.0, 20.0, 20.0, s31_db], true).unwrap()
    }

    #[test]
    fn objective_examples() {
        let g = cf_gap_objective(1.81).unwrap();
        assert!((g - 1.3177).abs() < 1e-3, "{g}");
        assert!(cf_gap_objective(1e-12).unwrap() > 10.0);
        assert!(cf_gap_objective(0.0).is_err());
        assert!(cf_gap_objective(-1.0).is_err());
        let (n, m) = cf_gap_argmin(0.5, 5.0, 1e-3).unwrap();
        assert!((1.7..=1.95).contains(&n) && (1.31..=1.33).contains(&m), "{n} {m}");
    }

    #[test]
    fn ordering_chain() {
        let t = cf_terms(&reference(3.0), &CfConfig::default());
        for k in 0..2 {
            for v in [t.i[k], t.ip[k]] {
                assert!(v[0] <= v[1] + 1e-12 && v[1] <= v[3] + 1e-12);
                assert!(v[0] <= v[2] + 1e-12 && v[2] <= v[3] + 1e-12);
            }
        }
    }

    #[test]
    fn no_cross_links_gives_rectangle() {
        let ch = ChannelSnr::new([10.0, 0.0, 3.0, 0.0, 5.0, 2.0, 4.0], false).unwrap();
        let r = hk_region(&ch);
        let s = r.support().unwrap();
        assert!((s[0] - cap(10.0).unwrap()).abs() < 1e-12);
        assert!((s[1] - cap(5.0).unwrap()).abs() < 1e-12);
        assert!((s[2] - s[0] - s[1]).abs() < 1e-12);
    }

    #[test]
    fn all_zero_is_origin() {
        let ch = ChannelSnr::new([0.0; 7], true).unwrap();
        assert_eq!(hk_region(&ch).vertices().unwrap(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn relay_free_terms_reproduce_hk() {
        let ch = reference(5.0);
        let t = CfTerms { i: hk_terms(&ch), ip: hk_terms(&ch) };
        let a = cf_region_from_terms(&t).support().unwrap();
        let b = hk_region(&ch).support().unwrap();
        for d in 0..5 {
            assert!((a[d] - b[d]).abs() < 1e-12);
        }
    }

    #[test]
    fn weak_relay_close_to_hk() {
        let cfg = CfConfig::default();
        for (db, tol) in [(-15.0, 1e-2), (-40.0, 1e-3)] {
            let ch = reference(db);
            let cf = cf_region(&ch, &cfg).max_sum_rate().unwrap();
            let hk = hk_region(&ch).max_sum_rate().unwrap();
            assert!(cf >= hk - 1e-12 && cf - hk < tol, "{db}: {cf} {hk}");
        }
    }

    #[test]
    fn large_noise_limit_without_relay_link() {
        let ch = ChannelSnr::from_db([12.0, 3.0, 7.0, -4.0, 15.0, 9.0, -400.0], true)
            .unwrap()
            .with_s31(0.0);
        let t = cf_terms(&ch, &CfConfig::new(1e6).unwrap());
        for k in 0..2 {
            for i in 0..4 {
                assert!((t.i[k][i] - t.ip[k][i]).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn bad_config() {
        assert!(CfConfig::new(0.0).is_err());
        assert!(CfConfig::new(f64::NAN).is_err());
        assert!(CfConfig::new(2.0).is_ok());
    }
}
