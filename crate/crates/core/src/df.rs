//! Decode-and-forward inner bounds.
//!
//! Both regions use independent source/relay inputs and fixed Gaussian
//! auxiliaries: the common layer of source 1 is a noisy copy of its
//! interference at receiver 2, the common layer of source 2 a noisy copy of
//! its interference at receiver 1, and the relay's common layer a scaled
//! noisy copy of its own contribution at receiver 2. The partial scheme adds
//! an intermediate layer `U1`, a noisy copy of what the relay hears. The
//! binning penalty, at most 1/2 bit under these choices, is replaced by 1/2.

use serde::{Deserialize, Serialize};

use crate::gauss::{c, half_log2, ChannelSnr};
use crate::geometry::{hull_union, Direction, RateRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DfRegionKind {
    Full,
    Partial,
}

/// Effective-SNR factor of the private layer of source 2 at receiver 2.
pub fn g1(ch: &ChannelSnr) -> f64 {
    let (a, b) = (ch.s21, ch.s23);
    (1.0 + 2.0 * a + 2.0 * b + a * a + 2.0 * a * b) / (1.0 + 3.0 * a + 3.0 * b + 2.0 * a * a + 4.0 * a * b)
}

/// Effective-SNR factor left by the genie copy of source 2 at receiver 1.
pub fn g2(ch: &ChannelSnr) -> f64 {
    (1.0 + ch.s12) / (1.0 + 2.0 * ch.s12)
}

/// Loss factor of the relay-decoded layer at the relay.
pub fn g31(ch: &ChannelSnr) -> f64 {
    (1.0 + ch.s31) / (1.0 + 2.0 * ch.s31)
}

/// Loss factor of the relay-decoded layer once the common layer is known.
pub fn g32(ch: &ChannelSnr) -> f64 {
    (1.0 + ch.s21 + ch.s31) / (1.0 + ch.s21 + 2.0 * ch.s31)
}

/// Mutual-information atoms of the full scheme under the fixed auxiliaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfFullTerms {
    /// `I(X1; Y3 | X3)`
    pub relay: f64,
    /// `I(X1; Y3 | V1 X3)`
    pub relay_given_v1: f64,
    /// `I(X1 X3; Y1 | V2)`
    pub y1_given_v2: f64,
    /// `I(X2; Y2 | V1 V3)`
    pub x2_given_v1v3: f64,
    /// `I(X1 X3; Y1 | V1 V2 V3)`
    pub y1_private: f64,
    /// `I(V1 X2 V3; Y2)`
    pub y2_all: f64,
    /// `I(X1 V2 X3; Y1 | V1 V3)`
    pub y1_given_v1v3: f64,
    /// `I(V1 X2 V3; Y2 | V2)`
    pub y2_given_v2: f64,
    /// `I(X1 V2 X3; Y1)`
    pub y1_all: f64,
    /// `I(X2; Y2 | V1 V2 V3)`
    pub x2_private: f64,
}

/// Extra atoms of the partial scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfPartialTerms {
    /// `I(U1; Y3 | X3)`
    pub u1_relay: f64,
    /// `I(U1; Y3 | V1 X3)`
    pub u1_relay_given_v1: f64,
    /// `I(X1; Y1 | V1 U1 V2 X3)`
    pub x1_given_u1: f64,
    /// `I(X1 V2; Y1 | V1 U1 X3)`
    pub x1v2_given_u1: f64,
}

/// The `F` term: effective SNR of `(X1, X3)` at receiver 1 once the
/// common layers are known.
fn f_term(ch: &ChannelSnr) -> f64 {
    let ChannelSnr { s11, s13, s21, s23, .. } = *ch;
    (s11 + s13 + ch.delta() + s11 * s23 / (1.0 + s21)) / (1.0 + s21 + 2.0 * s23)
}

pub fn df_full_terms(ch: &ChannelSnr) -> DfFullTerms {
    let ChannelSnr { s11, s12, s13, s21, s22, s23, s31, .. } = *ch;
    let (g1, g2) = (g1(ch), g2(ch));
    let f = f_term(ch);
    DfFullTerms {
        relay: c(s31),
        relay_given_v1: c(s31 / (1.0 + s21)),
        y1_given_v2: c(g2 * (s11 + s13)),
        x2_given_v1v3: c(g1 * s22),
        y1_private: c(g2 * f),
        y2_all: c(s21 + s22 + s23) + half_log2(g1),
        y1_given_v1v3: c(s12 + f) + half_log2(g2),
        y2_given_v2: c(s21 + s23 + s22 / (1.0 + s12)) + half_log2(g1),
        y1_all: c(s11 + s12 + s13) + half_log2(g2),
        x2_private: c(g1 * s22 / (1.0 + s12)),
    }
}

pub fn df_partial_terms(ch: &ChannelSnr) -> DfPartialTerms {
    let ChannelSnr { s11, s12, s21, s31, .. } = *ch;
    let g2 = g2(ch);
    DfPartialTerms {
        u1_relay: c(s31) + half_log2(g31(ch)),
        u1_relay_given_v1: c(s31 / (1.0 + s21)) + half_log2(g32(ch)),
        x1_given_u1: c(g2 * s11 / (1.0 + s21 + s31)),
        x1v2_given_u1: c(s12 + s11 / (1.0 + s21 + s31)) + half_log2(g2),
    }
}

/// Binning penalty used in place of the exact binning rate.
const BIN: f64 = 0.5;

/// The ten bounds of the reduced full scheme, clipped at 0.
pub fn df_full_bounds(ch: &ChannelSnr) -> [(Direction, f64); 10] {
    df_full_raw_bounds(ch).map(|(d, b)| (d, b.max(0.0)))
}

/// The ten bounds of the reduced full scheme before clipping; the
/// penalized ones can be negative at low SNR.
pub fn df_full_raw_bounds(ch: &ChannelSnr) -> [(Direction, f64); 10] {
    use Direction::*;
    let t = df_full_terms(ch);
    [
        (R1, t.relay),
        (R1, t.y1_given_v2),
        (R2, t.x2_given_v1v3 - BIN),
        (Sum, t.y1_private + t.y2_all),
        (Sum, t.relay_given_v1 + t.y2_all - BIN),
        (Sum, t.y1_given_v1v3 + t.y2_given_v2),
        (Sum, t.y1_all + t.x2_private - BIN),
        (TwoR1R2, t.y1_private + t.y1_all + t.y2_given_v2),
        (TwoR1R2, t.relay_given_v1 + t.y1_all + t.y2_given_v2 - BIN),
        (R1TwoR2, t.y1_given_v1v3 + t.x2_private + t.y2_all),
    ]
}

/// The fourteen bounds of the reduced partial scheme, clipped at 0.
pub fn df_partial_bounds(ch: &ChannelSnr) -> [(Direction, f64); 14] {
    df_partial_raw_bounds(ch).map(|(d, b)| (d, b.max(0.0)))
}

/// The fourteen bounds of the reduced partial scheme before clipping.
pub fn df_partial_raw_bounds(ch: &ChannelSnr) -> [(Direction, f64); 14] {
    use Direction::*;
    let t = df_full_terms(ch);
    let p = df_partial_terms(ch);
    [
        (R1, p.u1_relay + p.x1_given_u1),
        (R1, t.y1_given_v2),
        (R2, t.x2_given_v1v3 - BIN),
        (Sum, t.y1_private + t.y2_all),
        (Sum, p.u1_relay_given_v1 + p.x1_given_u1 + t.y2_all - BIN),
        (Sum, t.y1_given_v1v3 + t.y2_given_v2),
        (Sum, p.u1_relay_given_v1 + p.x1v2_given_u1 + t.y2_given_v2 - BIN),
        (Sum, t.y1_all + t.x2_private - BIN),
        (Sum, p.u1_relay + p.x1v2_given_u1 + t.x2_private),
        (TwoR1R2, t.y1_private + t.y1_all + t.y2_given_v2),
        (TwoR1R2, t.y1_private + p.x1v2_given_u1 + p.u1_relay + t.y2_given_v2),
        (TwoR1R2, p.u1_relay_given_v1 + p.x1_given_u1 - BIN + t.y1_all + t.y2_given_v2),
        (R1TwoR2, t.y1_given_v1v3 + t.x2_private + t.y2_all),
        (R1TwoR2, p.u1_relay_given_v1 + p.x1v2_given_u1 - BIN + t.x2_private + t.y2_all),
    ]
}

pub fn df_full_region(ch: &ChannelSnr) -> RateRegion {
    RateRegion::from_bounds(df_full_bounds(ch)).expect("closed-form bounds are finite")
}

pub fn df_partial_region(ch: &ChannelSnr) -> RateRegion {
    RateRegion::from_bounds(df_partial_bounds(ch)).expect("closed-form bounds are finite")
}

pub fn df_region(ch: &ChannelSnr, kind: DfRegionKind) -> RateRegion {
    match kind {
        DfRegionKind::Full => df_full_region(ch),
        DfRegionKind::Partial => df_partial_region(ch),
    }
}

/// Convex hull of the union of the full and partial regions.
pub fn df_best_region(ch: &ChannelSnr) -> RateRegion {
    hull_union(&[df_full_region(ch), df_partial_region(ch)]).expect("DF regions contain the origin")
}
