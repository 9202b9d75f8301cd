//! Planar rate-region polytopes.
//!
//! A [`RateRegion`] is the set of nonnegative rate pairs satisfying a list of
//! half-planes `a1 R1 + a2 R2 <= b` whose normals come from a fixed
//! five-direction vocabulary. Because every normal is nonnegative, a region
//! contains the origin iff every bound is nonnegative, and its shape is
//! fully described by its five support values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex deduplication and membership tolerance, in bits.
pub const GEOM_TOL: f64 = 1e-9;

/// The five admissible plane normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// `R1`
    R1,
    /// `R2`
    R2,
    /// `R1 + R2`
    Sum,
    /// `2 R1 + R2`
    TwoR1R2,
    /// `R1 + 2 R2`
    R1TwoR2,
}

impl Direction {
    pub const ALL: [Direction; 5] = [Direction::R1, Direction::R2, Direction::Sum, Direction::TwoR1R2, Direction::R1TwoR2];

    pub fn coeffs(self) -> (f64, f64) {
        match self {
            Direction::R1 => (1.0, 0.0),
            Direction::R2 => (0.0, 1.0),
            Direction::Sum => (1.0, 1.0),
            Direction::TwoR1R2 => (2.0, 1.0),
            Direction::R1TwoR2 => (1.0, 2.0),
        }
    }

    pub fn from_coeffs(a1: u32, a2: u32) -> Result<Self> {
        match (a1, a2) {
            (1, 0) => Ok(Direction::R1),
            (0, 1) => Ok(Direction::R2),
            (1, 1) => Ok(Direction::Sum),
            (2, 1) => Ok(Direction::TwoR1R2),
            (1, 2) => Ok(Direction::R1TwoR2),
            _ => Err(Error::Domain(format!("({a1},{a2}) is not an admissible plane normal"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::R1 => "R1",
            Direction::R2 => "R2",
            Direction::Sum => "R1+R2",
            Direction::TwoR1R2 => "2R1+R2",
            Direction::R1TwoR2 => "R1+2R2",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// `a1 R1 + a2 R2 <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub dir: Direction,
    pub b: f64,
}

impl HalfPlane {
    pub fn new(dir: Direction, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Domain(format!("bound for {} must be finite, got {b}", dir.label())));
        }
        Ok(Self { dir, b })
    }

    pub fn a1(&self) -> f64 {
        self.dir.coeffs().0
    }

    pub fn a2(&self) -> f64 {
        self.dir.coeffs().1
    }

    fn eval(&self, p: (f64, f64)) -> f64 {
        let (a1, a2) = self.dir.coeffs();
        a1 * p.0 + a2 * p.1
    }
}

/// Intersection of half-planes with the nonnegative quadrant.
///
/// The raw plane list is kept as given so that callers can report every
/// individual bound; geometric queries use the tightest bound per direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    planes: Vec<HalfPlane>,
}

impl RateRegion {
    pub fn new(planes: Vec<HalfPlane>) -> Result<Self> {
        for p in &planes {
            if !p.b.is_finite() {
                return Err(Error::Domain(format!("bound for {} must be finite", p.dir.label())));
            }
        }
        Ok(Self { planes })
    }

    /// Builds a region from `(direction, bound)` pairs.
    pub fn from_bounds<I: IntoIterator<Item = (Direction, f64)>>(bounds: I) -> Result<Self> {
        Self::new(bounds.into_iter().map(|(d, b)| HalfPlane::new(d, b)).collect::<Result<_>>()?)
    }

    pub fn planes(&self) -> &[HalfPlane] {
        &self.planes
    }

    /// Tightest bound in each direction, `None` where no plane is present.
    pub fn tightest(&self) -> [Option<f64>; 5] {
        let mut out = [None; 5];
        for p in &self.planes {
            let slot = &mut out[p.dir.index()];
            *slot = Some(slot.map_or(p.b, |v: f64| v.min(p.b)));
        }
        out
    }

    /// At most one plane per direction, in vocabulary order.
    pub fn canonical(&self) -> RateRegion {
        let planes = Direction::ALL
            .iter()
            .zip(self.tightest())
            .filter_map(|(&dir, b)| b.map(|b| HalfPlane { dir, b }))
            .collect();
        RateRegion { planes }
    }

    pub fn is_empty(&self) -> bool {
        self.planes.iter().any(|p| p.b < 0.0)
    }

    /// True iff every plane holds within `tol` and both rates are `>= -tol`.
    pub fn contains(&self, p: (f64, f64), tol: f64) -> bool {
        p.0 >= -tol && p.1 >= -tol && self.planes.iter().all(|h| h.eval(p) <= h.b + tol)
    }

    /// Counterclockwise vertices starting at the origin.
    pub fn vertices(&self) -> Result<Vec<(f64, f64)>> {
        if self.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let t = self.tightest();
        let b1 = t[Direction::R1.index()].ok_or(Error::UnboundedRegion("no single-rate bound on R1"))?;
        let b2 = t[Direction::R2.index()].ok_or(Error::UnboundedRegion("no single-rate bound on R2"))?;
        let mut poly = vec![(0.0, 0.0), (b1, 0.0), (b1, b2), (0.0, b2)];
        for dir in [Direction::Sum, Direction::TwoR1R2, Direction::R1TwoR2] {
            if let Some(b) = t[dir.index()] {
                poly = clip(&poly, HalfPlane { dir, b });
            }
        }
        Ok(dedup_ring(poly))
    }

    /// `max w1 R1 + w2 R2` over the region.
    pub fn max_weighted(&self, w1: f64, w2: f64) -> Result<f64> {
        if !(w1 >= 0.0 && w2 >= 0.0) || (w1 == 0.0 && w2 == 0.0) {
            return Err(Error::Domain(format!("weights must be nonnegative and not both zero, got ({w1}, {w2})")));
        }
        let v = self.vertices()?;
        Ok(v.iter().map(|p| w1 * p.0 + w2 * p.1).fold(f64::NEG_INFINITY, f64::max))
    }

    /// Support values in the five vocabulary directions.
    pub fn support(&self) -> Result<[f64; 5]> {
        let v = self.vertices()?;
        Ok(Direction::ALL.map(|d| {
            let (a1, a2) = d.coeffs();
            v.iter().map(|p| a1 * p.0 + a2 * p.1).fold(f64::NEG_INFINITY, f64::max)
        }))
    }

    /// Maximum sum rate.
    pub fn max_sum_rate(&self) -> Result<f64> {
        self.max_weighted(1.0, 1.0)
    }
}

/// One Sutherland-Hodgman pass of a convex polygon against a half-plane.
fn clip(poly: &[(f64, f64)], h: HalfPlane) -> Vec<(f64, f64)> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let fc = h.eval(cur) - h.b;
        let fnx = h.eval(next) - h.b;
        if fc <= 0.0 {
            out.push(cur);
        }
        if (fc < 0.0 && fnx > 0.0) || (fc > 0.0 && fnx < 0.0) {
            let t = fc / (fc - fnx);
            out.push((cur.0 + t * (next.0 - cur.0), cur.1 + t * (next.1 - cur.1)));
        }
    }
    out
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() <= GEOM_TOL && (a.1 - b.1).abs() <= GEOM_TOL
}

fn dedup_ring(poly: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().map_or(true, |&q| !close(p, q)) {
            out.push(p);
        }
    }
    while out.len() > 1 && close(out[0], *out.last().unwrap()) {
        out.pop();
    }
    out
}

/// Tightest five-direction region containing every input region.
///
/// Each support value is the maximum over the inputs, which is exactly the
/// support of the convex hull of their union in these directions.
pub fn hull_union(rs: &[RateRegion]) -> Result<RateRegion> {
    if rs.is_empty() {
        return Err(Error::Domain("hull_union needs at least one region".into()));
    }
    let mut best = [f64::NEG_INFINITY; 5];
    for r in rs {
        for (b, s) in best.iter_mut().zip(r.support()?) {
            *b = b.max(s);
        }
    }
    RateRegion::from_bounds(Direction::ALL.into_iter().zip(best))
}

/// Smallest `g >= 0` with `a1 max(p1-g,0) + a2 max(p2-g,0) <= b`.
fn diagonal_shift(p: (f64, f64), h: HalfPlane) -> f64 {
    let (a1, a2) = h.dir.coeffs();
    let (p1, p2) = (p.0.max(0.0), p.1.max(0.0));
    let full = a1 * p1 + a2 * p2;
    if full <= h.b {
        return 0.0;
    }
    let lo = p1.min(p2);
    // both coordinates still positive on [0, lo]
    let at_lo = full - (a1 + a2) * lo;
    if at_lo <= h.b {
        return (full - h.b) / (a1 + a2);
    }
    // only the larger coordinate remains on [lo, hi]
    let (a, hi) = if p1 >= p2 { (a1, p1) } else { (a2, p2) };
    hi - h.b / a
}

/// Per-dimension constant gap from `inner` to `outer`.
///
/// The smallest `g` such that every vertex of `outer`, moved down the
/// diagonal by `g` and clipped at the axes, lies in `inner`.
pub fn gap_per_dim(outer: &RateRegion, inner: &RateRegion) -> Result<f64> {
    if inner.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let verts = outer.vertices()?;
    let planes = inner.canonical();
    let mut g = 0.0f64;
    for &p in &verts {
        for &h in planes.planes() {
            g = g.max(diagonal_shift(p, h));
        }
    }
    Ok(g)
}

/// Bound-by-bound gap: the largest per-dimension deficit
/// `(a1 p1 + a2 p2 - b) / (a1 + a2)` over outer vertices `p` and the given
/// inner bounds, without clipping shifted points at the axes. Inner bounds
/// may be negative. Never exceeds [`gap_per_dim`] on the clipped region.
pub fn bound_gap_per_dim(outer: &RateRegion, inner: &[(Direction, f64)]) -> Result<f64> {
    let verts = outer.vertices()?;
    let mut g = 0.0f64;
    for &(x, y) in &verts {
        for &(d, b) in inner {
            let (a1, a2) = d.coeffs();
            g = g.max((a1 * x + a2 * y - b) / (a1 + a2));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(b: &[(Direction, f64)]) -> RateRegion {
        RateRegion::from_bounds(b.iter().copied()).unwrap()
    }

    fn pentagon() -> RateRegion {
        region(&[(Direction::R1, 2.0), (Direction::R2, 1.0), (Direction::Sum, 2.5)])
    }

    #[test]
    fn vertex_examples() {
        let v = pentagon().vertices().unwrap();
        assert_eq!(v, vec![(0.0, 0.0), (2.0, 0.0), (2.0, 0.5), (1.5, 1.0), (0.0, 1.0)]);
        let sq = region(&[(Direction::R1, 1.0), (Direction::R2, 1.0)]);
        assert_eq!(sq.vertices().unwrap().len(), 4);
        let half = region(&[(Direction::R1, 1.0)]);
        assert!(matches!(half.vertices(), Err(Error::UnboundedRegion(_))));
        let empty = region(&[(Direction::R1, 1.0), (Direction::R2, -0.1)]);
        assert_eq!(empty.vertices(), Err(Error::EmptyRegion));
    }

    #[test]
    fn degenerate_regions() {
        let point = region(&[(Direction::R1, 0.0), (Direction::R2, 0.0), (Direction::Sum, 0.0)]);
        assert_eq!(point.vertices().unwrap(), vec![(0.0, 0.0)]);
        let segment = region(&[(Direction::R1, 0.5), (Direction::R2, 0.0)]);
        assert_eq!(segment.vertices().unwrap(), vec![(0.0, 0.0), (0.5, 0.0)]);
        assert_eq!(segment.max_sum_rate().unwrap(), 0.5);
    }

    #[test]
    fn contains_examples() {
        let r = pentagon();
        assert!(r.contains((0.0, 0.0), 1e-9));
        assert!(!r.contains((2.0, 0.6), 1e-9));
        for v in r.vertices().unwrap() {
            assert!(r.contains(v, 1e-9));
        }
        assert!(!r.contains((-0.1, 0.0), 1e-9));
    }

    #[test]
    fn max_weighted_examples() {
        let sq = region(&[(Direction::R1, 1.0), (Direction::R2, 1.0)]);
        assert_eq!(sq.max_weighted(1.0, 1.0).unwrap(), 2.0);
        assert_eq!(pentagon().max_weighted(1.0, 1.0).unwrap(), 2.5);
        assert_eq!(pentagon().max_weighted(1.0, 0.0).unwrap(), 2.0);
        assert!(pentagon().max_weighted(0.0, 0.0).is_err());
    }

    #[test]
    fn hull_union_examples() {
        let r = pentagon();
        let h = hull_union(&[r.clone()]).unwrap();
        assert_eq!(h.support().unwrap(), r.support().unwrap());

        let a = region(&[(Direction::R1, 3.0), (Direction::R2, 1.0)]);
        let b = region(&[(Direction::R1, 1.0), (Direction::R2, 2.5)]);
        let h = hull_union(&[a, b]).unwrap();
        assert_eq!(h.max_sum_rate().unwrap(), 4.0_f64.max(3.5));

        let small = region(&[(Direction::R1, 1.0), (Direction::R2, 0.5)]);
        let h = hull_union(&[r.clone(), small]).unwrap();
        assert_eq!(h.support().unwrap(), r.support().unwrap());
    }

    #[test]
    fn gap_examples() {
        let r = pentagon();
        assert_eq!(gap_per_dim(&r, &r).unwrap(), 0.0);
        let big = region(&[(Direction::R1, 2.0), (Direction::R2, 2.0)]);
        let small = region(&[(Direction::R1, 1.0), (Direction::R2, 1.0)]);
        assert!((gap_per_dim(&big, &small).unwrap() - 1.0).abs() < 1e-12);
        let tight = region(&[(Direction::R1, 2.0), (Direction::R2, 1.0), (Direction::Sum, 1.5)]);
        assert!((gap_per_dim(&r, &tight).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gap_clipping_cases() {
        // the outer corner (3, 0.2) must move past the R2 axis
        let outer = region(&[(Direction::R1, 3.0), (Direction::R2, 0.2)]);
        let inner = region(&[(Direction::R1, 1.0), (Direction::R2, 1.0), (Direction::TwoR1R2, 1.0)]);
        // need 2*(3-g) <= 1 once R2 is clipped
        assert!((gap_per_dim(&outer, &inner).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn canonical_keeps_tightest() {
        let r = region(&[(Direction::R1, 2.0), (Direction::R1, 1.0), (Direction::R2, 1.0)]);
        let c = r.canonical();
        assert_eq!(c.planes().len(), 2);
        assert_eq!(c.planes()[0].b, 1.0);
    }
}
