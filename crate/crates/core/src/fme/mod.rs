//! Symbolic elimination over linear inequalities in rate variables.
//!
//! Mutual-information quantities are opaque symbols, nonnegative unless
//! listed as `free:`. No information identities are applied; the only
//! relations between symbols are the declared axioms and rewrites.
//!
//! The usual flow is [`IneqSystem::from_str`] (or [`builtin::system`]),
//! [`project`], and [`check_against_target`].

mod builtin;
mod cone;
mod ineq;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

pub use builtin::{builtin_names, fme_check, system as builtin_system, Builtin, FmeCheck};
pub use cone::ImplicationContext;
pub use ineq::{format_comb, Axiom, Coeffs, LinEq, LinIneq, Q, UNIT};
pub use parse::parse_comb;

use crate::error::{Error, Result};

/// A set of rate inequalities, rate equalities and symbol relations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IneqSystem {
    pub ineqs: Vec<LinIneq>,
    /// Rate equalities, each `sum = 0`; used to substitute variables away.
    pub eqs: Vec<LinEq>,
    pub axioms: Vec<Axiom>,
    /// Symbol substitutions applied by [`project`] after elimination.
    pub rewrites: Vec<(String, String)>,
    pub elim_order: Vec<String>,
    /// Symbols whose sign is unknown.
    pub sign_free: BTreeSet<String>,
}

impl IneqSystem {
    pub fn from_ineqs(ineqs: Vec<LinIneq>) -> Self {
        IneqSystem { ineqs, ..Default::default() }
    }

    /// Rate variables appearing in inequalities or equalities.
    pub fn rate_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.ineqs.iter().flat_map(|i| i.rates.keys().cloned()).collect();
        out.extend(self.eqs.iter().flat_map(|e| e.coeffs.keys().cloned()));
        out
    }

    /// Symbols appearing in inequalities, excluding the unit.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.ineqs.iter().flat_map(|i| i.syms.keys()).filter(|s| s.as_str() != UNIT).cloned().collect()
    }

    /// Axioms and rewrites may mention only symbols used by some inequality
    /// or declared sign-free.
    pub fn validate(&self) -> Result<()> {
        let mut known = self.symbols();
        known.extend(self.sign_free.iter().cloned());
        known.insert(UNIT.to_string());
        for ax in &self.axioms {
            for s in ax.lhs.keys().chain(ax.rhs.keys()) {
                if !known.contains(s) {
                    return Err(Error::Config(format!("axiom `{ax}` uses undeclared symbol `{s}`")));
                }
            }
        }
        for (from, _) in &self.rewrites {
            if !known.contains(from) {
                return Err(Error::Config(format!("rewrite of undeclared symbol `{from}`")));
            }
        }
        for ineq in &self.ineqs {
            if ineq.is_trivial() {
                return Err(Error::Config("inequality with no terms".into()));
            }
        }
        Ok(())
    }

    /// Rates that are implicitly nonnegative: every rate not scheduled for
    /// elimination.
    pub fn nonneg_rates(&self) -> BTreeSet<String> {
        let elim: BTreeSet<&String> = self.elim_order.iter().collect();
        self.rate_vars().into_iter().filter(|r| !elim.contains(r)).collect()
    }

    pub fn context(&self) -> ImplicationContext {
        ImplicationContext {
            nonneg_rates: self.nonneg_rates(),
            sign_free: self.sign_free.clone(),
            axioms: self.axioms.clone(),
        }
    }

    /// Evaluates every inequality at the given point.
    pub fn holds(&self, rates: &Coeffs, syms: &Coeffs) -> bool {
        self.ineqs.iter().all(|i| i.holds(rates, syms))
    }

    fn with_ineqs(&self, ineqs: Vec<LinIneq>) -> IneqSystem {
        IneqSystem { ineqs, ..self.clone() }
    }
}

impl FromStr for IneqSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_system(s)
    }
}

impl fmt::Display for IneqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.elim_order.is_empty() {
            writeln!(f, "eliminate: {}", self.elim_order.join(", "))?;
        }
        if !self.sign_free.is_empty() {
            let v: Vec<&str> = self.sign_free.iter().map(String::as_str).collect();
            writeln!(f, "free: {}", v.join(", "))?;
        }
        for ax in &self.axioms {
            writeln!(f, "{ax}")?;
        }
        for (a, b) in &self.rewrites {
            writeln!(f, "rewrite: {a} -> {b}")?;
        }
        for e in &self.eqs {
            // print as `X = rest`
            let (var, expr) = {
                let (v, _) = e.coeffs.iter().next().expect("equalities are nonempty");
                (v.clone(), e.solve_for(v).unwrap_or_default())
            };
            writeln!(f, "{var} = {}", format_comb(&expr))?;
        }
        for i in &self.ineqs {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

// --- elimination ---

/// Removes `var`. An equality containing it is solved and substituted;
/// otherwise every upper bound on `var` is paired with every lower bound.
/// Absent variables leave the system unchanged.
pub fn eliminate(sys: &IneqSystem, var: &str) -> IneqSystem {
    if let Some(pos) = sys.eqs.iter().position(|e| e.coeffs.contains_key(var)) {
        let expr = sys.eqs[pos].solve_for(var).expect("equality contains var");
        let eqs = sys
            .eqs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, e)| e.substitute(var, &expr))
            .filter(|e| !e.coeffs.is_empty())
            .collect();
        let ineqs = sys.ineqs.iter().map(|i| i.substitute(var, &expr)).filter(|i| !i.is_trivial()).collect();
        return IneqSystem { ineqs, eqs, ..sys.clone() };
    }
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out = Vec::new();
    for i in &sys.ineqs {
        let c = i.rate(var);
        if c.is_positive() {
            upper.push((i, c));
        } else if c.is_negative() {
            lower.push((i, -c));
        } else {
            out.push(i.clone());
        }
    }
    for (u, cu) in &upper {
        for (l, cl) in &lower {
            let mut comb = u.combine(cl, l, cu);
            comb.rates.remove(var);
            if !comb.is_trivial() {
                out.push(comb);
            }
        }
    }
    sys.with_ineqs(out)
}

/// Scales every inequality to coprime integers, sorts and removes exact
/// duplicates. When two copies differ only in strictness the strict one is
/// kept.
pub fn canonicalize(sys: &IneqSystem) -> IneqSystem {
    let mut v: Vec<LinIneq> = sys.ineqs.iter().map(LinIneq::canonical).collect();
    // strict copies sort first and survive the dedup
    v.sort_by(|a, b| (&a.rates, &a.syms, !a.strict).cmp(&(&b.rates, &b.syms, !b.strict)));
    v.dedup_by(|a, b| a.rates == b.rates && a.syms == b.syms);
    sys.with_ineqs(v)
}

/// `rhs(b) <= rhs(a)` follows from symbol nonnegativity and the axioms.
fn rhs_dominates(ctx: &ImplicationContext, a: &LinIneq, b: &LinIneq) -> bool {
    let mut d = a.syms.clone();
    ineq::add_into(&mut d, &b.syms, &-Q::one());
    ctx.implies(&LinIneq::new(Coeffs::new(), d, false), &[])
}

/// Drops every inequality `A` for which some other `B` has the same rate
/// coefficients and a right-hand side provably no larger. Among mutually
/// dominating copies the first in canonical order survives.
pub fn remove_dominated(sys: &IneqSystem) -> IneqSystem {
    let sys = canonicalize(sys);
    let ctx = sys.context();
    let v = &sys.ineqs;
    let keep: Vec<LinIneq> = (0..v.len())
        .filter(|&i| {
            !(0..v.len()).any(|j| {
                j != i
                    && v[j].rates == v[i].rates
                    && rhs_dominates(&ctx, &v[i], &v[j])
                    && (j < i || !rhs_dominates(&ctx, &v[j], &v[i]))
            })
        })
        .map(|i| v[i].clone())
        .collect();
    sys.with_ineqs(keep)
}

/// Drops inequalities implied by the remaining ones (nonnegative
/// combinations, rate nonnegativity, symbol nonnegativity and axioms).
/// Candidates are visited in canonical order.
pub fn remove_redundant(sys: &IneqSystem) -> IneqSystem {
    let sys = canonicalize(sys);
    let ctx = sys.context();
    let mut keep: Vec<bool> = vec![true; sys.ineqs.len()];
    for i in 0..sys.ineqs.len() {
        let others: Vec<&LinIneq> =
            sys.ineqs.iter().enumerate().filter(|(j, _)| *j != i && keep[*j]).map(|(_, x)| x).collect();
        if ctx.implies(&sys.ineqs[i], &others) {
            keep[i] = false;
        }
    }
    let ineqs = sys.ineqs.iter().zip(&keep).filter(|(_, k)| **k).map(|(x, _)| x.clone()).collect();
    sys.with_ineqs(ineqs)
}

/// Replaces symbols per the rewrite list. A rewrite stands for replacing a
/// quantity by a smaller one, so axioms survive only where the old symbol
/// sits on the smaller side.
pub fn apply_rewrites(sys: &IneqSystem) -> IneqSystem {
    let mut out = sys.clone();
    for (a, b) in &sys.rewrites {
        out.ineqs = out.ineqs.iter().map(|i| i.rewrite_symbol(a, b)).collect();
        out.axioms = out
            .axioms
            .iter()
            .filter(|x| !x.slack().get(a).is_some_and(|c| c.is_positive()))
            .map(|x| x.rewrite_symbol(a, b))
            .collect();
        if out.sign_free.remove(a) {
            out.sign_free.insert(b.clone());
        }
    }
    out.rewrites.clear();
    out
}

/// Result of [`project`].
#[derive(Debug, Clone)]
pub struct Projection {
    /// Remaining rate inequalities, irredundant.
    pub system: IneqSystem,
    /// Rate-free inequalities produced by elimination that do not follow
    /// from the symbol relations; they restrict the symbols, not the rates.
    pub conditions: Vec<LinIneq>,
}

/// Moves rate-free inequalities out; trivially true ones are dropped.
fn split_conditions(sys: IneqSystem, conditions: &mut Vec<LinIneq>) -> IneqSystem {
    let ctx = sys.context();
    let (free, rest): (Vec<_>, Vec<_>) = sys.ineqs.iter().cloned().partition(LinIneq::is_rate_free);
    for c in free {
        if !ctx.implies(&c, &[]) && !conditions.iter().any(|x| x.same_as(&c)) {
            conditions.push(c.canonical());
        }
    }
    sys.with_ineqs(rest)
}

/// Eliminates every variable of `elim_order` in turn, pruning redundant
/// inequalities after each step, then applies the rewrites and prunes
/// again.
pub fn project(sys: &IneqSystem) -> Projection {
    let mut conditions = Vec::new();
    let mut cur = sys.clone();
    for var in &sys.elim_order {
        cur = eliminate(&cur, var);
        cur = split_conditions(cur, &mut conditions);
        cur = remove_redundant(&cur);
    }
    cur.elim_order.clear();
    // the former elimination variables no longer exist; keep nonnegativity
    // information for what remains
    let mut cur = apply_rewrites(&cur);
    conditions = conditions
        .iter()
        .map(|c| sys.rewrites.iter().fold(c.clone(), |acc, (a, b)| acc.rewrite_symbol(a, b)))
        .collect();
    cur = remove_redundant(&cur);
    conditions.sort();
    Projection { system: cur, conditions }
}

// --- comparison ---

/// Outcome of comparing a derived inequality set with a target set.
#[derive(Debug, Clone, Default)]
pub struct Comparison {
    /// Target inequalities implied by the derived set.
    pub matched: Vec<LinIneq>,
    /// Derived inequalities not implied by the target set.
    pub extra_in_derived: Vec<LinIneq>,
    /// Target inequalities not implied by the derived set.
    pub missing: Vec<LinIneq>,
}

/// Compares two inequality sets by mutual implication, using the symbol
/// relations and rate nonnegativity of `derived`.
pub fn check_against_target(derived: &IneqSystem, target: &IneqSystem) -> Comparison {
    let derived = canonicalize(derived);
    let target = canonicalize(target);
    let mut ctx = derived.context();
    ctx.nonneg_rates.extend(target.nonneg_rates());
    ctx.axioms.extend(target.axioms.iter().cloned());
    let d: Vec<&LinIneq> = derived.ineqs.iter().collect();
    let t: Vec<&LinIneq> = target.ineqs.iter().collect();
    let mut out = Comparison::default();
    for x in &target.ineqs {
        if ctx.implies(x, &d) {
            out.matched.push(x.clone());
        } else {
            out.missing.push(x.clone());
        }
    }
    for x in &derived.ineqs {
        if !ctx.implies(x, &t) {
            out.extra_in_derived.push(x.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> IneqSystem {
        s.parse().unwrap()
    }

    #[test]
    fn eliminate_examples() {
        let out = canonicalize(&eliminate(&sys("t <= a\nr - t <= 0"), "t"));
        assert_eq!(out, canonicalize(&sys("r <= a")));
        let out = canonicalize(&eliminate(&sys("t <= a\nt <= b\nr - t <= 0"), "t"));
        assert_eq!(out, canonicalize(&sys("r <= a\nr <= b")));
        // absent variable
        let s = sys("r <= a");
        assert_eq!(eliminate(&s, "t"), s);
        // substitution through an equality
        let out = canonicalize(&eliminate(&sys("R1 = R10 + R11\nR10 <= a\nR11 <= b"), "R1"));
        assert_eq!(out.ineqs.len(), 2);
        assert!(out.eqs.is_empty());
    }

    #[test]
    fn strictness_propagates() {
        let out = eliminate(&sys("t < a\nr - t <= 0"), "t");
        assert!(out.ineqs[0].strict);
    }

    #[test]
    fn canonical_examples() {
        let a = canonicalize(&sys("2*R1 + 4*R2 <= 6*S\nR1 + 2*R2 <= 3*S"));
        assert_eq!(a.ineqs.len(), 1);
        assert_eq!(a.ineqs[0].to_string(), "R1 + 2*R2 <= 3*S");
        let b = canonicalize(&sys("R1 <= A + B"));
        let c = canonicalize(&sys("R1 <= B + A"));
        assert_eq!(b, c);
        assert!(canonicalize(&IneqSystem::default()).ineqs.is_empty());
        // fractions and strictness
        let d = canonicalize(&sys("1/2*R1 <= 1/3*S\nR1 < 2/3*S"));
        assert_eq!(d.ineqs.len(), 1);
        assert!(d.ineqs[0].strict);
        assert_eq!(d.ineqs[0].to_string(), "3*R1 < 2*S");
    }

    #[test]
    fn domination_examples() {
        let out = remove_dominated(&sys("R1 <= s1 + s2\nR1 <= s1"));
        assert_eq!(out.ineqs.len(), 1);
        assert_eq!(out.ineqs[0].to_string(), "R1 <= s1");
        let out = remove_dominated(&sys("free: s3\nR1 <= s1 - s3\nR1 <= s1"));
        assert_eq!(out.ineqs.len(), 2);
        let out = remove_dominated(&sys("R1 <= A\nR1 <= B\naxiom: B >= A"));
        assert_eq!(out.ineqs[0].to_string(), "R1 <= A");
        assert_eq!(out.ineqs.len(), 1);
        // different rate coefficients never dominate
        let out = remove_dominated(&sys("R1 <= A\nR1 + R2 <= A"));
        assert_eq!(out.ineqs.len(), 2);
    }

    #[test]
    fn redundancy_uses_combinations() {
        let out = remove_redundant(&sys("R1 <= A\nR2 <= B\nR1 + R2 <= A + B"));
        assert_eq!(out.ineqs.len(), 2);
        // R1 <= A + B follows from R1 + R2 <= A with R2 >= 0
        let out = remove_redundant(&sys("R1 + R2 <= A\nR1 <= A + B"));
        assert_eq!(out.ineqs.len(), 1);
    }

    #[test]
    fn identical_sets_match() {
        let a = sys("R1 <= A\nR1 + R2 <= B\nR2 <= C");
        let cmp = check_against_target(&a, &a);
        assert_eq!(cmp.matched.len(), 3);
        assert!(cmp.extra_in_derived.is_empty() && cmp.missing.is_empty());
    }

    #[test]
    fn display_roundtrip() {
        let s = sys("eliminate: T\nfree: S\naxiom: A >= B\nrewrite: A -> B\nR1 = R10 + R11\nR1 - T < A + B + S - 1/2");
        let back: IneqSystem = s.to_string().parse().unwrap();
        assert_eq!(canonicalize(&back), canonicalize(&s));
    }
}
