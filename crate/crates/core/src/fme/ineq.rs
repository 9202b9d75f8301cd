//! Linear inequalities over rate variables and opaque information symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Sparse linear combination keyed by variable or symbol name.
pub type Coeffs = BTreeMap<String, Q>;

/// Name of the constant symbol; `c*1` on a right-hand side is the number `c`.
pub const UNIT: &str = "1";

#[cfg(test)]
pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn add_into(dst: &mut Coeffs, src: &Coeffs, k: &Q) {
    for (name, c) in src {
        let e = dst.entry(name.clone()).or_insert_with(Q::zero);
        *e += c * k;
        if e.is_zero() {
            dst.remove(name);
        }
    }
}

fn prune(c: &mut Coeffs) {
    c.retain(|_, v| !v.is_zero());
}

/// `sum(rates) <= sum(syms)`, or `<` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinIneq {
    pub rates: Coeffs,
    pub syms: Coeffs,
    pub strict: bool,
}

impl LinIneq {
    pub fn new(mut rates: Coeffs, mut syms: Coeffs, strict: bool) -> Self {
        prune(&mut rates);
        prune(&mut syms);
        LinIneq { rates, syms, strict }
    }

    pub fn rate(&self, var: &str) -> Q {
        self.rates.get(var).cloned().unwrap_or_else(Q::zero)
    }

    /// True when no rate variable appears (a condition on the symbols).
    pub fn is_rate_free(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.rates.is_empty() && self.syms.is_empty()
    }

    /// `self * a + other * b` for positive `a`, `b`.
    pub fn combine(&self, a: &Q, other: &LinIneq, b: &Q) -> LinIneq {
        let mut rates = Coeffs::new();
        add_into(&mut rates, &self.rates, a);
        add_into(&mut rates, &other.rates, b);
        let mut syms = Coeffs::new();
        add_into(&mut syms, &self.syms, a);
        add_into(&mut syms, &other.syms, b);
        LinIneq::new(rates, syms, self.strict || other.strict)
    }

    /// Replaces `var` by the linear rate expression `expr`.
    pub fn substitute(&self, var: &str, expr: &Coeffs) -> LinIneq {
        let Some(c) = self.rates.get(var).cloned() else {
            return self.clone();
        };
        let mut rates = self.rates.clone();
        rates.remove(var);
        add_into(&mut rates, expr, &c);
        LinIneq::new(rates, self.syms.clone(), self.strict)
    }

    pub fn rewrite_symbol(&self, from: &str, to: &str) -> LinIneq {
        let Some(c) = self.syms.get(from).cloned() else {
            return self.clone();
        };
        let mut syms = self.syms.clone();
        syms.remove(from);
        let mut one = Coeffs::new();
        one.insert(to.to_string(), c);
        add_into(&mut syms, &one, &Q::one());
        LinIneq::new(self.rates.clone(), syms, self.strict)
    }

    /// Scales to coprime integer coefficients. The direction is preserved.
    pub fn canonical(&self) -> LinIneq {
        let all = || self.rates.values().chain(self.syms.values());
        if all().next().is_none() {
            return LinIneq::new(Coeffs::new(), Coeffs::new(), self.strict);
        }
        let lcm = all().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = all().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        let k = Q::new(lcm, gcd);
        let scale = |m: &Coeffs| m.iter().map(|(n, c)| (n.clone(), c * &k)).collect::<Coeffs>();
        LinIneq::new(scale(&self.rates), scale(&self.syms), self.strict)
    }

    /// Same inequality up to positive scaling and strictness.
    pub fn same_as(&self, other: &LinIneq) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.rates == b.rates && a.syms == b.syms
    }

    pub fn lhs(&self, rates: &BTreeMap<String, Q>) -> Q {
        dot(&self.rates, rates)
    }

    pub fn rhs(&self, syms: &BTreeMap<String, Q>) -> Q {
        dot(&self.syms, syms)
    }

    /// Evaluates the inequality; missing names count as 0, the unit symbol
    /// as 1.
    pub fn holds(&self, rates: &BTreeMap<String, Q>, syms: &BTreeMap<String, Q>) -> bool {
        let (l, r) = (self.lhs(rates), self.rhs(syms));
        if self.strict {
            l < r
        } else {
            l <= r
        }
    }
}

fn dot(c: &Coeffs, vals: &BTreeMap<String, Q>) -> Q {
    c.iter().fold(Q::zero(), |acc, (n, k)| {
        let v = if n == UNIT { Q::one() } else { vals.get(n).cloned().unwrap_or_else(Q::zero) };
        acc + k * v
    })
}

/// Rate equality `sum(coeffs) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinEq {
    pub coeffs: Coeffs,
}

impl LinEq {
    pub fn new(mut coeffs: Coeffs) -> Self {
        prune(&mut coeffs);
        LinEq { coeffs }
    }

    /// Solves for `var`, returning the expression it equals.
    pub fn solve_for(&self, var: &str) -> Option<Coeffs> {
        let c = self.coeffs.get(var)?;
        let k = -(Q::one() / c);
        let mut out = Coeffs::new();
        for (n, v) in &self.coeffs {
            if n != var {
                out.insert(n.clone(), v * &k);
            }
        }
        Some(out)
    }

    pub fn substitute(&self, var: &str, expr: &Coeffs) -> LinEq {
        let Some(c) = self.coeffs.get(var).cloned() else {
            return self.clone();
        };
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(var);
        add_into(&mut coeffs, expr, &c);
        LinEq::new(coeffs)
    }
}

/// Declared ordering `sum(lhs) >= sum(rhs)` between symbol combinations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub lhs: Coeffs,
    pub rhs: Coeffs,
}

impl Axiom {
    /// `lhs - rhs`, a combination known to be nonnegative.
    pub fn slack(&self) -> Coeffs {
        let mut d = self.lhs.clone();
        add_into(&mut d, &self.rhs, &-Q::one());
        d
    }

    pub fn rewrite_symbol(&self, from: &str, to: &str) -> Axiom {
        let sw = |m: &Coeffs| {
            let mut out = Coeffs::new();
            for (n, c) in m {
                let name = if n == from { to } else { n.as_str() };
                let mut one = Coeffs::new();
                one.insert(name.to_string(), c.clone());
                add_into(&mut out, &one, &Q::one());
            }
            out
        };
        Axiom { lhs: sw(&self.lhs), rhs: sw(&self.rhs) }
    }
}

// --- display ---

fn fmt_coef(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Writes a combination as `a*X + Y - 1/2`; the empty sum prints as `0`.
pub fn format_comb(c: &Coeffs) -> String {
    let mut out = String::new();
    // constants go last
    let terms = c.iter().filter(|(n, _)| n.as_str() != UNIT).chain(c.iter().filter(|(n, _)| n.as_str() == UNIT));
    for (name, k) in terms {
        let neg = k.is_negative();
        let a = k.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if name == UNIT {
            out.push_str(&fmt_coef(&a));
        } else if a.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{}*{}", fmt_coef(&a), name));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LinIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { "<" } else { "<=" };
        write!(f, "{} {} {}", format_comb(&self.rates), op, format_comb(&self.syms))
    }
}

impl fmt::Display for LinEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", format_comb(&self.coeffs))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom: {} >= {}", format_comb(&self.lhs), format_comb(&self.rhs))
    }
}
