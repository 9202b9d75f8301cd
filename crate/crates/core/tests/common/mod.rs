//! Helpers shared by the integration tests.
#![allow(dead_code)]

use irc_core::fme::{builtin_system, eliminate, Coeffs, IneqSystem, Q};
use irc_core::geometry::{Direction, RateRegion};
use irc_core::ChannelSnr;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

/// Channel with every link uniform in dB over `[lo, hi]` and a random
/// sign parity.
pub fn random_channel<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> ChannelSnr {
    let db: [f64; 7] = std::array::from_fn(|_| rng.gen_range(lo..=hi));
    ChannelSnr::from_db(db, rng.gen()).unwrap()
}

/// Bounded region with single-rate bounds in `[0.1, scale]` and random
/// extra bounds on the other directions.
pub fn random_region<R: Rng>(rng: &mut R, scale: f64) -> RateRegion {
    let r1 = rng.gen_range(0.1..scale);
    let r2 = rng.gen_range(0.1..scale);
    let mut b = vec![(Direction::R1, r1), (Direction::R2, r2)];
    for d in [Direction::Sum, Direction::TwoR1R2, Direction::R1TwoR2] {
        if rng.gen_bool(0.7) {
            let (a1, a2) = d.coeffs();
            let full = a1 * r1 + a2 * r2;
            b.push((d, rng.gen_range(0.3..1.0) * full));
        }
    }
    RateRegion::from_bounds(b).unwrap()
}

/// How far `p` lies outside `r` (0 when inside).
pub fn violation(r: &RateRegion, p: (f64, f64)) -> f64 {
    let mut v = (-p.0).max(-p.1).max(0.0);
    for h in r.planes() {
        v = v.max(h.a1() * p.0 + h.a2() * p.1 - h.b);
    }
    v
}

pub fn rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Q {
    Q::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(den))
}

/// Whether some value of `var` satisfies `sys` at the given point, by
/// intersecting the interval each inequality allows.
pub fn extendable(sys: &IneqSystem, var: &str, rates: &Coeffs, syms: &Coeffs) -> bool {
    let mut lo: Option<(Q, bool)> = None;
    let mut hi: Option<(Q, bool)> = None;
    for i in &sys.ineqs {
        let c = i.rate(var);
        let mut rest = i.clone();
        rest.rates.remove(var);
        if c.is_zero() {
            if !i.holds(rates, syms) {
                return false;
            }
            continue;
        }
        let bound = (rest.rhs(syms) - rest.lhs(rates)) / &c;
        if c > Q::zero() {
            let tighter = hi.as_ref().map_or(true, |(h, s)| bound < *h || (bound == *h && i.strict && !s));
            if tighter {
                hi = Some((bound, i.strict));
            }
        } else {
            let tighter = lo.as_ref().map_or(true, |(l, s)| bound > *l || (bound == *l && i.strict && !s));
            if tighter {
                lo = Some((bound, i.strict));
            }
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => if ls || hs { l < h } else { l <= h },
        _ => true,
    }
}

/// Checks, for every elimination step of the built-in systems, that a
/// random point satisfies the eliminated system exactly when it extends to
/// the original one. Returns whether all checks agreed and how many random
/// assignments were drawn.
pub fn projection_soundness(assignments: usize, seed: u64) -> (bool, usize) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // every elimination step of the two decode-and-forward systems
    let mut steps: Vec<(IneqSystem, String, IneqSystem)> = Vec::new();
    for name in ["df-full", "df-partial"] {
        let mut cur = builtin_system(name).unwrap().system;
        for var in cur.elim_order.clone() {
            let next = eliminate(&cur, &var);
            if cur.eqs.len() == next.eqs.len() {
                steps.push((cur.clone(), var.clone(), next.clone()));
            }
            cur = next;
        }
    }
    let mut ok = true;
    let (mut inside, mut outside) = (0usize, 0usize);
    for _ in 0..assignments {
        let (orig, var, proj) = &steps[rng.gen_range(0..steps.len())];
        let mut syms = Coeffs::new();
        for s in orig.symbols() {
            syms.insert(s, rational(&mut rng, 0, 80, 20));
        }
        let mut rates = Coeffs::new();
        for r in proj.rate_vars() {
            rates.insert(r, rational(&mut rng, -10, 60, 20));
        }
        let a = proj.holds(&rates, &syms);
        let b = extendable(orig, var, &rates, &syms);
        ok &= a == b;
        if a {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    // both outcomes must occur for the check to mean anything
    (ok && inside > 0 && outside > 0, assignments)
}
