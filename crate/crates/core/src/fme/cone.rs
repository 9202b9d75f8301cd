//! Implication between inequalities as an exact linear feasibility problem.
//!
//! `target` follows from `premises` when there are multipliers `l >= 0` with
//! `sum l_B a_B >= a_target` on implicitly nonnegative rates (equality on the
//! others) and `b_target - sum l_B b_B` lies in the cone spanned by the
//! nonnegative symbols and the declared axioms.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::ineq::{Axiom, Coeffs, LinIneq, Q, UNIT};

/// Decides `A x = b, x >= 0` by phase-one simplex with Bland's rule.
pub(crate) fn feasible(a: &[Vec<Q>], b: &[Q]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Q::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // objective row: minimize the sum of artificials, in reduced form
    let mut obj = vec![Q::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let p = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        basis[r] = enter;
    }
    t[m][width - 1].is_zero()
}

/// Context shared by implication queries on one system.
#[derive(Debug, Clone, Default)]
pub struct ImplicationContext {
    /// Rate variables known to be nonnegative.
    pub nonneg_rates: BTreeSet<String>,
    /// Symbols of unknown sign; every other symbol is nonnegative.
    pub sign_free: BTreeSet<String>,
    pub axioms: Vec<Axiom>,
}

impl ImplicationContext {
    fn sym_nonneg(&self, s: &str) -> bool {
        s == UNIT || !self.sign_free.contains(s)
    }

    /// `rhs` is provably nonnegative by a componentwise check.
    fn trivially_nonneg(&self, rhs: &Coeffs) -> bool {
        rhs.iter().all(|(s, c)| !c.is_negative() && self.sym_nonneg(s))
    }

    /// Cheap sufficient check: a single premise with the same rates and a
    /// componentwise smaller right-hand side.
    fn quick(&self, target: &LinIneq, premises: &[&LinIneq]) -> bool {
        premises.iter().any(|p| {
            p.rates == target.rates && {
                let mut d = target.syms.clone();
                super::ineq::add_into(&mut d, &p.syms, &-Q::one());
                self.trivially_nonneg(&d)
            }
        })
    }

    /// Whether `target` follows from `premises` (closure; strictness is
    /// ignored).
    pub fn implies(&self, target: &LinIneq, premises: &[&LinIneq]) -> bool {
        if target.is_rate_free() && self.trivially_nonneg(&target.syms) {
            return true;
        }
        if self.quick(target, premises) {
            return true;
        }
        let mut rates: BTreeSet<&str> = target.rates.keys().map(String::as_str).collect();
        let mut syms: BTreeSet<&str> = target.syms.keys().map(String::as_str).collect();
        for p in premises {
            rates.extend(p.rates.keys().map(String::as_str));
            syms.extend(p.syms.keys().map(String::as_str));
        }
        for ax in &self.axioms {
            syms.extend(ax.lhs.keys().map(String::as_str));
            syms.extend(ax.rhs.keys().map(String::as_str));
        }
        let rate_idx: BTreeMap<&str, usize> = rates.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let sym_idx: BTreeMap<&str, usize> = syms.iter().enumerate().map(|(i, s)| (*s, rates.len() + i)).collect();
        let m = rates.len() + syms.len();

        let mut cols: Vec<Vec<Q>> = Vec::new();
        for p in premises {
            let mut col = vec![Q::zero(); m];
            for (r, c) in &p.rates {
                col[rate_idx[r.as_str()]] = c.clone();
            }
            for (s, c) in &p.syms {
                col[sym_idx[s.as_str()]] = c.clone();
            }
            cols.push(col);
        }
        for r in &rates {
            if self.nonneg_rates.contains(*r) {
                let mut col = vec![Q::zero(); m];
                col[rate_idx[r]] = -Q::one();
                cols.push(col);
            }
        }
        for s in &syms {
            if self.sym_nonneg(s) {
                let mut col = vec![Q::zero(); m];
                col[sym_idx[s]] = Q::one();
                cols.push(col);
            }
        }
        for ax in &self.axioms {
            let mut col = vec![Q::zero(); m];
            for (s, c) in ax.slack() {
                col[sym_idx[s.as_str()]] = c;
            }
            cols.push(col);
        }
        let mut rhs = vec![Q::zero(); m];
        for (r, c) in &target.rates {
            rhs[rate_idx[r.as_str()]] = c.clone();
        }
        for (s, c) in &target.syms {
            rhs[sym_idx[s.as_str()]] = c.clone();
        }
        let a: Vec<Vec<Q>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        feasible(&a, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fme::ineq::q;

    #[test]
    fn simplex_basics() {
        // x + y = 1, x - y = 0
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert!(feasible(&a, &[q(1), q(0)]));
        // x + y = -1 has no nonnegative solution
        assert!(!feasible(&[vec![q(1), q(1)]], &[q(-1)]));
        // x = 1, x = 2
        assert!(!feasible(&[vec![q(1)], vec![q(1)]], &[q(1), q(2)]));
        // degenerate but feasible
        assert!(feasible(&[vec![q(1), q(-1)], vec![q(2), q(-2)]], &[q(0), q(0)]));
    }
}
