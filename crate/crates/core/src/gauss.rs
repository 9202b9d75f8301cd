//! Channel parameterization and Gaussian mutual-information evaluation.
//!
//! Every node transmits with unit power and every noise has unit variance;
//! link strengths are carried by gains `sqrt(SNR)`. Jointly Gaussian
//! variables are stored as linear combinations of independent standard
//! normal sources, so covariances are exact Gram products and genie copies
//! with independent noise are just extra source columns.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative eigenvalue cutoff used when a covariance is rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Comparison tolerance, in bits, used by downstream checks.
pub const BITS_TOL: f64 = 1e-9;

/// `C(x) = 1/2 log2(1 + x)`, the capacity of a real Gaussian channel at SNR `x`.
pub fn cap(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("cap() needs a nonnegative SNR, got {x}")));
    }
    Ok(c(x))
}

/// Unchecked `C(x)` for internal closed forms whose arguments are
/// nonnegative by construction.
#[inline]
pub(crate) fn c(x: f64) -> f64 {
    debug_assert!(x >= 0.0 || x.is_nan(), "C() of negative argument {x}");
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// `1/2 log2(x)`.
#[inline]
pub(crate) fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// The seven link SNRs of the interference relay channel plus the sign
/// parity of the direct/cross gain matrix `[[h11, h13], [h21, h23]]`.
///
/// `sign_parity == true` means that matrix has an even number of negative
/// entries, which selects the minus sign in [`ChannelSnr::delta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSnr {
    pub s11: f64,
    pub s12: f64,
    pub s13: f64,
    pub s21: f64,
    pub s22: f64,
    pub s23: f64,
    pub s31: f64,
    pub sign_parity: bool,
}

/// Signed real gains realizing a [`ChannelSnr`] under unit powers and noises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    pub h11: f64,
    pub h12: f64,
    pub h13: f64,
    pub h21: f64,
    pub h22: f64,
    pub h23: f64,
    pub h31: f64,
}

impl ChannelSnr {
    pub const FIELD_NAMES: [&'static str; 7] = ["s11", "s12", "s13", "s21", "s22", "s23", "s31"];

    /// Builds a channel from linear SNRs in the order `s11, s12, s13, s21, s22, s23, s31`.
    pub fn new(snr: [f64; 7], sign_parity: bool) -> Result<Self> {
        for (name, v) in Self::FIELD_NAMES.iter().zip(snr) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        let [s11, s12, s13, s21, s22, s23, s31] = snr;
        Ok(Self { s11, s12, s13, s21, s22, s23, s31, sign_parity })
    }

    pub fn from_db(db: [f64; 7], sign_parity: bool) -> Result<Self> {
        for (name, v) in Self::FIELD_NAMES.iter().zip(db) {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be a finite dB value, got {v}")));
            }
        }
        Self::new(db.map(db_to_linear), sign_parity)
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.s11, self.s12, self.s13, self.s21, self.s22, self.s23, self.s31]
    }

    pub fn to_db(&self) -> [f64; 7] {
        self.as_array().map(linear_to_db)
    }

    pub fn with_s31(mut self, s31: f64) -> Self {
        self.s31 = s31;
        self
    }

    pub fn with_parity(mut self, sign_parity: bool) -> Self {
        self.sign_parity = sign_parity;
        self
    }

    /// `delta = (sqrt(s11 s23) -/+ sqrt(s13 s21))^2`, i.e. `det(H Hᵀ)` for the
    /// 2x2 gain matrix seen by the two destinations from `(X1, X3)`.
    pub fn delta(&self) -> f64 {
        let a = (self.s11 * self.s23).sqrt();
        let b = (self.s13 * self.s21).sqrt();
        if self.sign_parity {
            (a - b).powi(2)
        } else {
            (a + b).powi(2)
        }
    }

    /// One gain realization consistent with the SNRs and the sign parity.
    /// Odd parity is realized by flipping `h21`.
    pub fn gains(&self) -> Gains {
        let h21 = if self.sign_parity { self.s21.sqrt() } else { -self.s21.sqrt() };
        Gains {
            h11: self.s11.sqrt(),
            h12: self.s12.sqrt(),
            h13: self.s13.sqrt(),
            h21,
            h22: self.s22.sqrt(),
            h23: self.s23.sqrt(),
            h31: self.s31.sqrt(),
        }
    }
}

/// A finite family of jointly Gaussian, zero-mean variables.
///
/// Each variable is stored as a row of mixing coefficients over independent
/// unit-variance sources; `cov` is the Gram matrix of those rows.
#[derive(Debug, Clone)]
pub struct GaussianSystem {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    mixing: Vec<Vec<f64>>,
    cov: DMatrix<f64>,
}

/// Incremental constructor for [`GaussianSystem`].
#[derive(Debug, Default, Clone)]
pub struct SystemBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    mixing: Vec<Vec<f64>>,
    sources: usize,
}

impl SystemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, label: &str, row: Vec<f64>) -> Result<()> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        self.index.insert(label.to_string(), self.labels.len());
        self.labels.push(label.to_string());
        self.mixing.push(row);
        Ok(())
    }

    /// Adds a fresh standard normal variable independent of everything so far.
    pub fn independent(mut self, label: &str) -> Result<Self> {
        let k = self.sources;
        self.sources += 1;
        let mut row = vec![0.0; self.sources];
        row[k] = 1.0;
        self.push(label, row)?;
        Ok(self)
    }

    /// Adds a fresh independent normal variable with the given variance.
    pub fn independent_with_var(self, label: &str, var: f64) -> Result<Self> {
        if !(var >= 0.0) {
            return Err(Error::Domain(format!("variance of {label} must be >= 0")));
        }
        let b = self.independent(label)?;
        let k = b.mixing.len() - 1;
        let mut b = b;
        let s = var.sqrt();
        b.mixing[k].iter_mut().for_each(|x| *x *= s);
        Ok(b)
    }

    /// Adds `label = sum coef * var` over already defined variables.
    pub fn combination(mut self, label: &str, terms: &[(&str, f64)]) -> Result<Self> {
        let mut row = vec![0.0; self.sources];
        for &(name, coef) in terms {
            let &i = self.index.get(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            for (r, m) in row.iter_mut().zip(&self.mixing[i]) {
                *r += coef * m;
            }
        }
        self.push(label, row)?;
        Ok(self)
    }

    /// Adds `label = sum coef * var + Z` with a fresh unit-variance noise `Z`.
    pub fn noisy_combination(self, label: &str, terms: &[(&str, f64)], noise_var: f64) -> Result<Self> {
        let noise = format!("__noise_{label}");
        let b = self.independent_with_var(&noise, noise_var)?;
        let mut all = terms.to_vec();
        all.push((noise.as_str(), 1.0));
        let mut b = b.combination(label, &all)?;
        // hide the helper noise label
        let k = b.index.remove(&noise).expect("helper label present");
        b.labels.remove(k);
        b.mixing.remove(k);
        for v in b.index.values_mut() {
            if *v > k {
                *v -= 1;
            }
        }
        Ok(b)
    }

    pub fn build(self) -> GaussianSystem {
        let n = self.labels.len();
        let width = self.sources;
        let mixing: Vec<Vec<f64>> = self
            .mixing
            .into_iter()
            .map(|mut r| {
                r.resize(width, 0.0);
                r
            })
            .collect();
        let mut cov = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = mixing[i].iter().zip(&mixing[j]).map(|(a, b)| a * b).sum();
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
        GaussianSystem { labels: self.labels, index: self.index, mixing, cov }
    }
}

impl GaussianSystem {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cov_matrix(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn idx(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn cov(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.cov[(self.idx(a)?, self.idx(b)?)])
    }

    pub fn var(&self, a: &str) -> Result<f64> {
        self.cov(a, a)
    }

    /// Mixing row of a variable over the independent sources.
    pub fn mixing_row(&self, label: &str) -> Result<&[f64]> {
        Ok(&self.mixing[self.idx(label)?])
    }

    fn indices(&self, set: &[&str]) -> Result<Vec<usize>> {
        set.iter().map(|l| self.idx(l)).collect()
    }

    /// `I(A; B | C)` in bits for jointly Gaussian label sets.
    ///
    /// Computed as `1/2 log2(det Σ_{B|C} / det Σ_{B|A∪C})`. Rank-deficient
    /// conditional covariances are handled on the range of `Σ_{B|C}`: if
    /// conditioning on `A` removes a direction that survives `C` alone, the
    /// information is infinite. Results are clipped below at 0.
    pub fn mutual_info(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        let ic = self.indices(c)?;
        let mut seen = vec![false; self.labels.len()];
        for (&i, name) in ia.iter().chain(&ib).chain(&ic).zip(a.iter().chain(b).chain(c)) {
            if seen[i] {
                return Err(Error::OverlappingLabels(name.to_string()));
            }
            seen[i] = true;
        }
        if ia.is_empty() || ib.is_empty() {
            return Ok(0.0);
        }
        let iac: Vec<usize> = ia.iter().chain(&ic).copied().collect();
        if let Some(v) = self.mi_sqrt(&ib, &ic, &iac) {
            return Ok(v.max(0.0));
        }
        if let Some(v) = self.mi_cholesky(&ia, &ib, &ic, &iac) {
            return Ok(v.max(0.0));
        }
        Ok(self.mi_eigen(&ib, &ic, &iac).max(0.0))
    }

    fn sub(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.cov[(rows[i], cols[j])])
    }

    /// Sum of `log2` conditional standard deviations of `last` given
    /// `first`, from a QR factorization of the mixing rows. Works on the
    /// square root of the covariance, so large gains cost no precision.
    fn cond_log_std(&self, first: &[usize], last: &[usize]) -> Option<f64> {
        let rows: Vec<usize> = first.iter().chain(last).copied().collect();
        let width = self.mixing[0].len();
        if rows.len() > width {
            return None;
        }
        let m = DMatrix::from_fn(width, rows.len(), |i, j| self.mixing[rows[j]][i]);
        let r = m.qr().r();
        let mut acc = 0.0;
        for (j, &row) in rows.iter().enumerate() {
            let norm = self.cov[(row, row)].sqrt();
            let d = r[(j, j)].abs();
            // near-dependent rows go to the eigen path
            if !(d > 1e-6 * norm) {
                return None;
            }
            if j >= first.len() {
                acc += d.log2();
            }
        }
        Some(acc)
    }

    /// `h(B|C) - h(B|AC)` from conditional standard deviations.
    fn mi_sqrt(&self, ib: &[usize], ic: &[usize], iac: &[usize]) -> Option<f64> {
        Some(self.cond_log_std(ic, ib)? - self.cond_log_std(iac, ib)?)
    }

    /// Fast path: all four joint covariances comfortably positive definite.
    fn mi_cholesky(&self, ia: &[usize], ib: &[usize], ic: &[usize], iac: &[usize]) -> Option<f64> {
        let ibc: Vec<usize> = ib.iter().chain(ic).copied().collect();
        let iabc: Vec<usize> = iac.iter().chain(ib).copied().collect();
        let _ = ia;
        let ld_ac = logdet_chol(&self.sub(iac, iac))?;
        let ld_bc = logdet_chol(&self.sub(&ibc, &ibc))?;
        let ld_c = if ic.is_empty() { 0.0 } else { logdet_chol(&self.sub(ic, ic))? };
        let ld_abc = logdet_chol(&self.sub(&iabc, &iabc))?;
        Some(0.5 * (ld_ac + ld_bc - ld_c - ld_abc) / std::f64::consts::LN_2)
    }

    /// `Σ_{B|C}` via a pseudo-inverse of `Σ_CC`.
    fn conditional_cov(&self, ib: &[usize], ic: &[usize]) -> DMatrix<f64> {
        let sbb = self.sub(ib, ib);
        if ic.is_empty() {
            return sbb;
        }
        let sbc = self.sub(ib, ic);
        let scc = self.sub(ic, ic);
        let pinv = pseudo_inverse_sym(&scc);
        let mut out = &sbb - &sbc * pinv * sbc.transpose();
        symmetrize(&mut out);
        out
    }

    fn mi_eigen(&self, ib: &[usize], ic: &[usize], iac: &[usize]) -> f64 {
        let outer = self.conditional_cov(ib, ic);
        let inner = self.conditional_cov(ib, iac);
        let eig = SymmetricEigen::new(outer);
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, &v| m.max(v.abs()));
        let keep: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > RANK_TOL * scale).collect();
        if keep.is_empty() {
            return 0.0;
        }
        let basis = DMatrix::from_fn(eig.eigenvectors.nrows(), keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
        let mut projected = basis.transpose() * inner * &basis;
        symmetrize(&mut projected);
        let pe = SymmetricEigen::new(projected);
        let mut bits = 0.0;
        for (&k, &lam) in keep.iter().zip(pe.eigenvalues.iter()) {
            if lam <= RANK_TOL * scale {
                return f64::INFINITY;
            }
            bits += eig.eigenvalues[k].log2() - lam.log2();
        }
        0.5 * bits
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn logdet_chol(m: &DMatrix<f64>) -> Option<f64> {
    let scale = (0..m.nrows()).fold(1.0f64, |s, i| s.max(m[(i, i)].abs()));
    let chol = m.clone().cholesky()?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        let d = l[(i, i)];
        // reject near-singular pivots; the eigen path handles those
        if !(d * d > 1e-8 * scale) {
            return None;
        }
        acc += 2.0 * d.ln();
    }
    Some(acc)
}

fn pseudo_inverse_sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |s, &v| s.max(v.abs()));
    let inv = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&v| if v > RANK_TOL * scale { 1.0 / v } else { 0.0 }),
    );
    &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose()
}

/// The interference relay channel with correlated source/relay inputs and the
/// genie variables used by the outer bound.
///
/// Labels: `X1 X2 X3 Z1 Z2 Z3 Y1 Y2 Y3 V1 V3 V2`. `corr(X1, X3) = rho`,
/// `X2` is independent of both. `V1 = h21 X1 + h23 X3 + Z2'`,
/// `V3 = h31 X1 + Z3'` and `V2 = h12 X2 + Z1'` are copies of the
/// interference signals with fresh noises.
pub fn build_system(ch: &ChannelSnr, rho: f64) -> Result<GaussianSystem> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::Domain(format!("correlation must lie in [-1, 1], got {rho}")));
    }
    let g = ch.gains();
    let orth = (1.0 - rho * rho).max(0.0).sqrt();
    let sys = SystemBuilder::new()
        .independent("X1")?
        .independent("__W3")?
        .combination("X3", &[("X1", rho), ("__W3", orth)])?
        .independent("X2")?
        .independent("Z1")?
        .independent("Z2")?
        .independent("Z3")?
        .combination("Y1", &[("X1", g.h11), ("X2", g.h12), ("X3", g.h13), ("Z1", 1.0)])?
        .combination("Y2", &[("X1", g.h21), ("X2", g.h22), ("X3", g.h23), ("Z2", 1.0)])?
        .combination("Y3", &[("X1", g.h31), ("Z3", 1.0)])?
        .noisy_combination("V1", &[("X1", g.h21), ("X3", g.h23)], 1.0)?
        .noisy_combination("V3", &[("X1", g.h31)], 1.0)?
        .noisy_combination("V2", &[("X2", g.h12)], 1.0)?
        .build();
    Ok(sys)
}

/// Convenience wrapper over [`GaussianSystem::mutual_info`].
pub fn mutual_info(sys: &GaussianSystem, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    sys.mutual_info(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: [f64; 7]) -> ChannelSnr {
        ChannelSnr::new(s, true).unwrap()
    }

    #[test]
    fn cap_examples() {
        assert_eq!(cap(0.0).unwrap(), 0.0);
        assert!((cap(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((cap(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(cap(-1e-3).is_err());
        assert!(cap(f64::NAN).is_err());
    }

    #[test]
    fn db_round_trip() {
        for db in [-20.0, -3.3, 0.0, 8.0, 20.0, 40.0] {
            let back = linear_to_db(db_to_linear(db));
            assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0));
        }
        let c = ChannelSnr::from_db([20.0, 8.0, 20.0, 8.0, 20.0, 20.0, -15.0], true).unwrap();
        let again = ChannelSnr::from_db(c.to_db(), true).unwrap();
        for (x, y) in c.as_array().iter().zip(again.as_array()) {
            assert!((x - y).abs() <= 1e-12 * x);
        }
    }

    #[test]
    fn rejects_bad_snr() {
        assert!(ChannelSnr::new([1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0], true).is_err());
        assert!(ChannelSnr::new([1.0, f64::INFINITY, 0.0, 0.0, 0.0, 0.0, 0.0], true).is_err());
    }

    #[test]
    fn build_system_examples() {
        let c0 = ch([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let sys = build_system(&c0, 0.0).unwrap();
        assert_eq!(sys.cov("X1", "X3").unwrap(), 0.0);
        assert_eq!(sys.cov("Z1", "Z2").unwrap(), 0.0);

        let c1 = ch([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0]);
        let sys = build_system(&c1, 1.0).unwrap();
        assert!((sys.var("Y3").unwrap() - 5.0).abs() < 1e-12);
        assert!((sys.cov("X1", "Y3").unwrap() - 2.0).abs() < 1e-12);
        assert!(build_system(&c1, 1.0 + 1e-9).is_err());
    }

    #[test]
    fn system_is_symmetric_psd() {
        let c0 = ch([3.0, 0.5, 10.0, 2.0, 100.0, 7.0, 40.0]);
        for rho in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            let sys = build_system(&c0, rho).unwrap();
            let m = sys.cov_matrix();
            assert!((m - m.transpose()).amax() < 1e-12);
            let eig = SymmetricEigen::new(m.clone());
            assert!(eig.eigenvalues.iter().all(|&v| v >= -1e-9));
        }
    }

    #[test]
    fn mutual_info_examples() {
        let sys = SystemBuilder::new()
            .independent("X1")
            .unwrap()
            .noisy_combination("Y", &[("X1", 1.0)], 1.0)
            .unwrap()
            .build();
        assert!((sys.mutual_info(&["X1"], &["Y"], &[]).unwrap() - 0.5).abs() < 1e-12);

        let c0 = ch([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 100.0]);
        let sys = build_system(&c0, 0.0).unwrap();
        let v = sys.mutual_info(&["X1"], &["Y3"], &[]).unwrap();
        // 1/2 log2(101)
        assert!((v - 3.329_105_741_375_897).abs() < 1e-9);
        assert_eq!(sys.mutual_info(&["X1"], &["Y2"], &["X1"]).unwrap_err(), Error::OverlappingLabels("X1".into()));
        assert!(sys.mutual_info(&["X9"], &["Y2"], &[]).is_err());
    }

    #[test]
    fn conditioning_on_the_source_itself_is_zero() {
        // X1 appears in the conditioning set only: I(X2; Y2 | X1) with X2 silent
        let c0 = ch([1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0]);
        let sys = build_system(&c0, 0.4).unwrap();
        assert!(sys.mutual_info(&["X2"], &["Y2"], &["X1"]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn singular_conditioning_uses_eigen_path() {
        let c0 = ch([2.0, 1.0, 3.0, 1.0, 1.0, 1.0, 5.0]);
        let sys = build_system(&c0, 1.0).unwrap();
        // X3 == X1 at rho = 1, so knowing X3 leaves nothing about X1
        let v = sys.mutual_info(&["X1"], &["Y1", "Y3"], &["X2", "X3"]).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
        // and a deterministic copy carries infinite information
        assert!(sys.mutual_info(&["X1"], &["X3"], &[]).unwrap().is_infinite());
    }

    #[test]
    fn genie_copy_matches_cap() {
        let c0 = ch([3.0, 17.0, 1.0, 2.0, 9.0, 4.0, 5.0]);
        let sys = build_system(&c0, 0.0).unwrap();
        let v = sys.mutual_info(&["X2"], &["V2"], &[]).unwrap();
        assert!((v - c(17.0)).abs() < 1e-9);
    }

    #[test]
    fn delta_sign_rule() {
        let mut c0 = ch([100.0, 0.0, 6.3096, 6.3096, 0.0, 100.0, 0.0]);
        assert!((c0.delta() - (100.0f64 - 6.3096).powi(2)).abs() < 1e-6);
        c0.sign_parity = false;
        assert!((c0.delta() - (100.0f64 + 6.3096).powi(2)).abs() < 1e-6);
    }
}
