//! Line-oriented text format for inequality systems.
//!
//! ```text
//! # comment
//! eliminate: R10, T10          # elimination order (optional)
//! free: S                      # symbols of unknown sign
//! axiom: I(A;B|C) >= I(A;B|CD) # declared ordering between symbols
//! rewrite: I(VU;Y) -> I(U;Y)   # symbol substitution applied after elimination
//! R1 = R10 + R11               # rate equality
//! R10 - T10 < -Ib              # inequality: rates left, symbols right
//! 2*R1 + R2 <= S1 + 1/2*S2 - 1
//! ```
//!
//! Names may contain any character other than whitespace, `+`, `-`, `*`,
//! `<`, `=`, `>`, `,`, and `#`, except that `-` and `+` are allowed inside
//! parentheses.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ineq::{add_into, Axiom, Coeffs, LinEq, LinIneq, Q, UNIT};
use super::IneqSystem;
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() || !s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => {
            if let Ok(n) = BigInt::from_str(s) {
                return Some(Q::from_integer(n));
            }
            // decimal literal
            let (int, frac) = s.split_once('.')?;
            let digits = format!("{int}{frac}");
            let n = BigInt::from_str(&digits).ok()?;
            Some(Q::new(n, num_traits::pow(BigInt::from(10), frac.len())))
        }
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "*<=>,#".contains(c))
}

/// Parses `a*X + Y - 1/2` into a sparse combination.
pub fn parse_comb(src: &str, line: usize) -> Result<Coeffs> {
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in src.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(line, "unbalanced `)`"));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                } else {
                    // leading or doubled sign
                    cur.clear();
                    if ch == '-' {
                        neg = !neg;
                    }
                }
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(perr(line, "unbalanced `(`"));
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    } else if !terms.is_empty() || neg {
        return Err(perr(line, format!("dangling sign in `{}`", src.trim())));
    }

    let mut out = Coeffs::new();
    for (neg, t) in terms {
        let t = t.trim();
        let (coef, name) = match t.split_once('*') {
            Some((c, n)) => {
                let c = parse_rational(c).ok_or_else(|| perr(line, format!("bad coefficient in `{t}`")))?;
                (c, n.trim().to_string())
            }
            None => match parse_rational(t) {
                Some(c) => (c, UNIT.to_string()),
                None => (Q::one(), t.to_string()),
            },
        };
        if !valid_name(&name) {
            return Err(perr(line, format!("bad name `{name}`")));
        }
        let coef = if neg { -coef } else { coef };
        let mut one = Coeffs::new();
        one.insert(name, coef);
        add_into(&mut out, &one, &Q::one());
    }
    Ok(out)
}

fn parse_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

/// Splits at the first relational operator outside parentheses.
fn split_relation(s: &str) -> Option<(&str, &'static str, &str)> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'<' | b'>' | b'=' if depth == 0 => {
                let two = bytes.get(i + 1) == Some(&b'=');
                let op = match (bytes[i], two) {
                    (b'<', true) => "<=",
                    (b'<', false) => "<",
                    (b'>', true) => ">=",
                    (b'>', false) => ">",
                    (b'=', _) => "=",
                    _ => unreachable!(),
                };
                let rest = if two && bytes[i] != b'=' { &s[i + 2..] } else { &s[i + 1..] };
                return Some((&s[..i], op, rest));
            }
            _ => {}
        }
    }
    None
}

fn expect_rates(c: &Coeffs, line: usize) -> Result<()> {
    if c.contains_key(UNIT) {
        return Err(perr(line, "constants belong on the right-hand side"));
    }
    Ok(())
}

/// Parses the text format described in the module docs.
pub(crate) fn parse_system(src: &str) -> Result<IneqSystem> {
    let mut sys = IneqSystem::default();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("eliminate:") {
            sys.elim_order.extend(parse_list(rest));
        } else if let Some(rest) = text.strip_prefix("free:") {
            sys.sign_free.extend(parse_list(rest));
        } else if let Some(rest) = text.strip_prefix("rewrite:") {
            let (a, b) = rest.split_once("->").ok_or_else(|| perr(line, "rewrite needs `A -> B`"))?;
            let (a, b) = (a.trim(), b.trim());
            if !valid_name(a) || !valid_name(b) {
                return Err(perr(line, "bad rewrite symbol"));
            }
            sys.rewrites.push((a.to_string(), b.to_string()));
        } else if let Some(rest) = text.strip_prefix("axiom:") {
            let (l, op, r) = split_relation(rest).ok_or_else(|| perr(line, "axiom needs a relation"))?;
            let (l, r) = (parse_comb(l, line)?, parse_comb(r, line)?);
            let ax = match op {
                ">=" => Axiom { lhs: l, rhs: r },
                "<=" => Axiom { lhs: r, rhs: l },
                _ => return Err(perr(line, "axioms use `>=` or `<=`")),
            };
            sys.axioms.push(ax);
        } else {
            let (l, op, r) = split_relation(text).ok_or_else(|| perr(line, "expected `<=`, `<` or `=`"))?;
            let lhs = parse_comb(l, line)?;
            let rhs = parse_comb(r, line)?;
            expect_rates(&lhs, line)?;
            match op {
                "=" => {
                    expect_rates(&rhs, line)?;
                    let mut c = lhs;
                    add_into(&mut c, &rhs, &-Q::one());
                    if c.is_empty() {
                        return Err(perr(line, "empty equality"));
                    }
                    sys.eqs.push(LinEq::new(c));
                }
                "<=" | "<" => {
                    let ineq = LinIneq::new(lhs, rhs, op == "<");
                    if ineq.is_trivial() {
                        return Err(perr(line, "inequality has no terms"));
                    }
                    sys.ineqs.push(ineq);
                }
                _ => return Err(perr(line, "rates go on the left of `<=` or `<`")),
            }
        }
    }
    sys.validate()?;
    Ok(sys)
}
