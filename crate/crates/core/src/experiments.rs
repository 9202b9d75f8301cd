//! Sweeps over the relay link, randomized gap audits and single-region
//! queries, with CSV/JSON-friendly outputs.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cf::{cf_region, hk_region, CfConfig, DEFAULT_CF_NOISE};
use crate::df::{df_best_region, df_full_raw_bounds, df_partial_raw_bounds, df_region, DfRegionKind};
use crate::error::{Error, Result};
use crate::gauss::ChannelSnr;
use crate::geometry::{bound_gap_per_dim, gap_per_dim, hull_union, Direction, RateRegion};
use crate::outer::{outer_region_cor1, outer_region_thm1_max, OuterConfig};

/// Link SNRs in dB of the reference sweep: strong direct and relay-destination
/// links, weak cross links. The last entry (relay link) is swept.
pub const REFERENCE_DB: [f64; 7] = [20.0, 8.0, 20.0, 8.0, 20.0, 20.0, 0.0];

/// Compress-and-forward or the relay-free baseline, whichever is larger.
pub fn cf_or_hk_region(ch: &ChannelSnr, cfg: &CfConfig) -> RateRegion {
    hull_union(&[cf_region(ch, cfg), hk_region(ch)]).expect("both regions contain the origin")
}

// --- region queries ---

/// Which region to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    OuterCor1,
    OuterThm1,
    DfFull,
    DfPartial,
    Cf,
    Hk,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] =
        [Self::OuterCor1, Self::OuterThm1, Self::DfFull, Self::DfPartial, Self::Cf, Self::Hk];

    pub fn name(self) -> &'static str {
        match self {
            Self::OuterCor1 => "outer-cor1",
            Self::OuterThm1 => "outer-thm1",
            Self::DfFull => "df-full",
            Self::DfPartial => "df-partial",
            Self::Cf => "cf",
            Self::Hk => "hk",
        }
    }

    pub fn region(self, ch: &ChannelSnr, cf: &CfConfig) -> Result<RateRegion> {
        Ok(match self {
            Self::OuterCor1 => outer_region_cor1(ch),
            Self::OuterThm1 => outer_region_thm1_max(ch, &OuterConfig::default())?,
            Self::DfFull => df_region(ch, DfRegionKind::Full),
            Self::DfPartial => df_region(ch, DfRegionKind::Partial),
            Self::Cf => cf_region(ch, cf),
            Self::Hk => hk_region(ch),
        })
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown bound `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneRecord {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

/// Serializable description of one region.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub bound: &'static str,
    pub snr_db: [f64; 7],
    pub sign_parity: &'static str,
    pub planes: Vec<PlaneRecord>,
    pub vertices: Vec<[f64; 2]>,
    pub max_sum_rate: f64,
}

pub fn parity_name(sign_parity: bool) -> &'static str {
    if sign_parity {
        "even"
    } else {
        "odd"
    }
}

pub fn region_report(ch: &ChannelSnr, bound: BoundKind, cf: &CfConfig) -> Result<RegionReport> {
    let r = bound.region(ch, cf)?;
    Ok(RegionReport {
        bound: bound.name(),
        snr_db: ch.to_db(),
        sign_parity: parity_name(ch.sign_parity),
        planes: r.planes().iter().map(|p| PlaneRecord { a1: p.a1(), a2: p.a2(), b: p.b }).collect(),
        vertices: r.vertices()?.into_iter().map(|(x, y)| [x, y]).collect(),
        max_sum_rate: r.max_sum_rate()?,
    })
}

// --- sweep over the relay link ---

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Link SNRs in dB; the relay-link entry is ignored.
    pub base_db: [f64; 7],
    pub sign_parity: bool,
    pub lo_db: f64,
    pub hi_db: f64,
    pub step_db: f64,
    pub cf_noise: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec { base_db: REFERENCE_DB, sign_parity: true, lo_db: -15.0, hi_db: 25.0, step_db: 0.5, cf_noise: DEFAULT_CF_NOISE }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo_db.is_finite() && self.hi_db.is_finite() && self.lo_db < self.hi_db) {
            return Err(Error::Config(format!("sweep range needs lo < hi, got [{}, {}]", self.lo_db, self.hi_db)));
        }
        if !(self.step_db > 0.0 && self.step_db.is_finite()) {
            return Err(Error::Config(format!("sweep step must be > 0, got {}", self.step_db)));
        }
        CfConfig::new(self.cf_noise)?;
        Ok(())
    }

    /// Sweep points, computed from an integer index to avoid drift.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi_db - self.lo_db) / self.step_db + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo_db + i as f64 * self.step_db).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub s31_db: f64,
    pub outer: f64,
    pub df: f64,
    pub cf: f64,
    pub hk: f64,
    pub gap_df: f64,
    pub gap_cf: f64,
}

pub fn sweep_point(spec: &SweepSpec, s31_db: f64) -> Result<SweepRow> {
    let mut db = spec.base_db;
    db[6] = s31_db;
    let ch = ChannelSnr::from_db(db, spec.sign_parity)?;
    let cfg = CfConfig::new(spec.cf_noise)?;
    let outer = outer_region_cor1(&ch);
    let df = df_best_region(&ch);
    let cf = cf_region(&ch, &cfg);
    let hk = hk_region(&ch);
    let cf_best = hull_union(&[cf.clone(), hk.clone()])?;
    let hk_sum = hk.max_sum_rate()?;
    Ok(SweepRow {
        s31_db,
        outer: outer.max_sum_rate()?,
        df: df.max_sum_rate()?,
        cf: cf.max_sum_rate()?.max(hk_sum),
        hk: hk_sum,
        gap_df: gap_per_dim(&outer, &df)?,
        gap_cf: gap_per_dim(&outer, &cf_best)?,
    })
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.points().into_iter().map(|s| sweep_point(spec, s)).collect()
}

pub const SWEEP_HEADER: &str = "s31_db,outer,df,cf,hk,gap_df,gap_cf";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.s31_db, r.outer, r.df, r.cf, r.hk, r.gap_df, r.gap_cf
        );
    }
    out
}

// --- randomized audits ---

/// SNR regimes with their best scheme and its proven gap ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Relay link at least as strong as the direct link; full DF.
    FullDf,
    /// Relay link at least as strong as the first cross link; partial DF.
    PartialDf,
    /// Relay link no stronger than the first cross link; CF.
    Cf,
    /// Relay link below both interference-normalized thresholds; relay ignored.
    HkNoRelay,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Self::FullDf, Self::PartialDf, Self::Cf, Self::HkNoRelay];

    pub fn name(self) -> &'static str {
        match self {
            Self::FullDf => "full-df",
            Self::PartialDf => "partial-df",
            Self::Cf => "cf",
            Self::HkNoRelay => "hk-no-relay",
        }
    }

    /// Gap ceiling in bits per dimension claimed for the regime.
    pub fn ceiling(self) -> f64 {
        match self {
            Self::FullDf | Self::HkNoRelay => 1.0,
            Self::PartialDf => 1.5,
            Self::Cf => 1.32,
        }
    }

    pub fn admits(self, ch: &ChannelSnr) -> bool {
        match self {
            Self::FullDf => ch.s31 >= ch.s11,
            Self::PartialDf => ch.s31 >= ch.s21,
            Self::Cf => ch.s31 <= ch.s21,
            Self::HkNoRelay => ch.s31 <= ch.s11 / (1.0 + ch.s12) && ch.s31 <= ch.s21 / (1.0 + ch.s22),
        }
    }

    pub fn inner_region(self, ch: &ChannelSnr, cf: &CfConfig) -> RateRegion {
        match self {
            Self::FullDf => df_region(ch, DfRegionKind::Full),
            Self::PartialDf => df_region(ch, DfRegionKind::Partial),
            Self::Cf => cf_or_hk_region(ch, cf),
            Self::HkNoRelay => hk_region(ch),
        }
    }

    pub fn gap(self, ch: &ChannelSnr, cf: &CfConfig) -> Result<f64> {
        gap_per_dim(&outer_region_cor1(ch), &self.inner_region(ch, cf))
    }

    /// Inner bounds before clipping at 0. Only the decode-and-forward
    /// regions have bounds that can go negative.
    pub fn raw_inner_bounds(self, ch: &ChannelSnr, cf: &CfConfig) -> Vec<(Direction, f64)> {
        match self {
            Self::FullDf => df_full_raw_bounds(ch).to_vec(),
            Self::PartialDf => df_partial_raw_bounds(ch).to_vec(),
            _ => self.inner_region(ch, cf).planes().iter().map(|h| (h.dir, h.b)).collect(),
        }
    }

    /// [`bound_gap_per_dim`] against the unclipped inner bounds.
    pub fn bound_gap(self, ch: &ChannelSnr, cf: &CfConfig) -> Result<f64> {
        bound_gap_per_dim(&outer_region_cor1(ch), &self.raw_inner_bounds(ch, cf))
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| Error::Config(format!("unknown regime `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSpec {
    pub regime: Regime,
    pub samples: usize,
    pub seed: u64,
    pub lo_db: f64,
    pub hi_db: f64,
    pub cf_noise: f64,
}

/// Draws allowed per requested sample before giving up on the filter.
pub const MAX_DRAWS_PER_SAMPLE: usize = 200;

/// Width of the histogram bins, in bits.
pub const HIST_BIN: f64 = 0.1;

impl AuditSpec {
    pub fn new(regime: Regime, samples: usize, seed: u64) -> Self {
        AuditSpec { regime, samples, seed, lo_db: -20.0, hi_db: 40.0, cf_noise: DEFAULT_CF_NOISE }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        if !(self.lo_db.is_finite() && self.hi_db.is_finite() && self.lo_db < self.hi_db) {
            return Err(Error::Config(format!("SNR range needs lo < hi, got [{}, {}]", self.lo_db, self.hi_db)));
        }
        CfConfig::new(self.cf_noise)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub snr_db: [f64; 7],
    pub sign_parity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub regime: Regime,
    pub seed: u64,
    /// Channels that passed the regime filter and were evaluated.
    pub samples: usize,
    /// Channels drawn in total.
    pub draws: usize,
    pub max_gap: f64,
    /// Largest bound-by-bound gap, shifted points not clipped at the axes.
    pub max_bound_gap: f64,
    pub ceiling: f64,
    pub argmax: ChannelRecord,
    pub histogram: Vec<HistBin>,
}

impl AuditReport {
    pub fn within_ceiling(&self, tol: f64) -> bool {
        self.max_gap <= self.ceiling + tol
    }
}

/// Draws channels uniformly in dB with a random sign parity, keeps those in
/// the regime and records the largest gap. Fails if no channel passes the
/// filter within the draw budget.
pub fn gap_audit(spec: &AuditSpec) -> Result<AuditReport> {
    spec.validate()?;
    let cfg = CfConfig::new(spec.cf_noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let budget = spec.samples.saturating_mul(MAX_DRAWS_PER_SAMPLE);
    let mut draws = 0;
    let mut gaps = Vec::with_capacity(spec.samples);
    let mut worst: Option<(f64, ChannelSnr)> = None;
    let mut max_bound_gap = 0.0f64;
    while gaps.len() < spec.samples && draws < budget {
        draws += 1;
        let db: [f64; 7] = std::array::from_fn(|_| rng.gen_range(spec.lo_db..=spec.hi_db));
        let parity: bool = rng.gen();
        let ch = ChannelSnr::from_db(db, parity)?;
        if !spec.regime.admits(&ch) {
            continue;
        }
        let g = spec.regime.gap(&ch, &cfg)?;
        gaps.push(g);
        max_bound_gap = max_bound_gap.max(spec.regime.bound_gap(&ch, &cfg)?);
        if worst.as_ref().map_or(true, |(w, _)| g > *w) {
            worst = Some((g, ch));
        }
    }
    let Some((max_gap, ch)) = worst else {
        return Err(Error::Config(format!(
            "no channel in regime {} after {draws} draws",
            spec.regime.name()
        )));
    };
    let nbins = (max_gap.max(0.0) / HIST_BIN).floor() as usize + 1;
    let mut histogram: Vec<HistBin> = (0..nbins)
        .map(|i| HistBin { lo: i as f64 * HIST_BIN, hi: (i + 1) as f64 * HIST_BIN, count: 0 })
        .collect();
    for g in &gaps {
        let i = ((g.max(0.0) / HIST_BIN).floor() as usize).min(nbins - 1);
        histogram[i].count += 1;
    }
    Ok(AuditReport {
        regime: spec.regime,
        seed: spec.seed,
        samples: gaps.len(),
        draws,
        max_gap,
        max_bound_gap,
        ceiling: spec.regime.ceiling(),
        argmax: ChannelRecord { snr_db: ch.to_db(), sign_parity: parity_name(ch.sign_parity).to_string() },
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points_hit_the_end() {
        let spec = SweepSpec::default();
        let p = spec.points();
        assert_eq!(p.len(), 81);
        assert_eq!(p[0], -15.0);
        assert_eq!(*p.last().unwrap(), 25.0);
    }

    #[test]
    fn bad_sweep_specs() {
        let mut s = SweepSpec::default();
        s.step_db = 0.0;
        assert!(sweep(&s).is_err());
        let mut s = SweepSpec::default();
        s.hi_db = s.lo_db;
        assert!(sweep(&s).is_err());
    }

    #[test]
    fn csv_layout() {
        let spec = SweepSpec { lo_db: 0.0, hi_db: 1.0, step_db: 1.0, ..Default::default() };
        let csv = sweep_csv(&sweep(&spec).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.000000,"));
        assert_eq!(lines[1].split(',').count(), 7);
    }

    #[test]
    fn audit_is_reproducible() {
        let spec = AuditSpec::new(Regime::FullDf, 5, 42);
        let a = gap_audit(&spec).unwrap();
        let b = gap_audit(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 5);
        assert_eq!(a.histogram.iter().map(|h| h.count).sum::<usize>(), 5);
    }

    #[test]
    fn empty_filter_is_an_error() {
        // with every link near 40 dB the relay link is never below s11/(1+s12)
        let mut spec = AuditSpec::new(Regime::HkNoRelay, 1, 1);
        spec.lo_db = 39.0;
        spec.hi_db = 40.0;
        assert!(gap_audit(&spec).is_err());
        assert!(gap_audit(&AuditSpec::new(Regime::Cf, 0, 1)).is_err());
    }

    #[test]
    fn names_roundtrip() {
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        for b in BoundKind::ALL {
            assert_eq!(b.name().parse::<BoundKind>().unwrap(), b);
        }
        assert!("x".parse::<Regime>().is_err());
    }
}
