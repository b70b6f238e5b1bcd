//! Indirect utilities over beliefs, expectations and convex envelopes.
//!
//! Closed-form utilities are binary-state only: a belief is identified with
//! the probability `x` of state 1 and the function is a list of pieces
//! `sum_k c_k (x - origin)^k + amplitude * cos(frequency * (x - origin) + phase)`.
//! At a shared endpoint the left piece is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::belief::{Belief, BeliefGrid, FiniteBeliefDistribution, GridKind, PROB_TOL};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::scalar::Scalar;

pub const MAX_DEGREE: usize = 6;

/// Largest jump at a junction still treated as continuous.
pub const CONTINUITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cosine {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    #[serde(default)]
    pub origin: f64,
    /// `coefficients[k]` multiplies `(x - origin)^k`.
    pub coefficients: Vec<f64>,
    #[serde(default)]
    pub cosine: Option<Cosine>,
}

impl Piece {
    pub fn polynomial(from: f64, to: f64, origin: f64, coefficients: Vec<f64>) -> Self {
        Self { from, to, origin, coefficients, cosine: None }
    }

    pub fn with_cosine(mut self, amplitude: f64, frequency: f64, phase: f64) -> Self {
        self.cosine = Some(Cosine { amplitude, frequency, phase });
        self
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_scalar(&x).expect("f64 supports cosine")
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S) -> Result<S> {
        let t = x.clone() - S::from_f64(self.origin);
        let mut acc = S::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * t.clone() + S::from_f64(*c);
        }
        if let Some(cos) = &self.cosine {
            let arg = S::from_f64(cos.frequency) * t + S::from_f64(cos.phase);
            let c = arg.cos().ok_or_else(|| {
                Error::Unsupported("cosine pieces cannot be evaluated in exact arithmetic".into())
            })?;
            acc = acc + S::from_f64(cos.amplitude) * c;
        }
        Ok(acc)
    }

    /// Derivative at `x`, used to locate chord-gap extrema.
    pub fn derivative(&self, x: f64) -> f64 {
        let t = x - self.origin;
        let mut acc = 0.0;
        for (k, c) in self.coefficients.iter().enumerate().skip(1).rev() {
            acc = acc * t + k as f64 * c;
        }
        if let Some(cos) = &self.cosine {
            acc -= cos.amplitude * cos.frequency * (cos.frequency * t + cos.phase).sin();
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseClosedForm {
    pieces: Vec<Piece>,
    continuous: bool,
}

impl PiecewiseClosedForm {
    pub fn new(pieces: Vec<Piece>, continuous: bool) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| Error::InvalidUtility("no pieces".into()))?;
        if first.from.abs() > PROB_TOL {
            return Err(Error::InvalidUtility(format!("first piece starts at {}, expected 0", first.from)));
        }
        let last = pieces.last().expect("nonempty");
        if (last.to - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidUtility(format!("last piece ends at {}, expected 1", last.to)));
        }
        for (i, p) in pieces.iter().enumerate() {
            let numbers = p.coefficients.iter().chain([&p.from, &p.to, &p.origin]);
            let cos_ok = p.cosine.map_or(true, |c| c.amplitude.is_finite() && c.frequency.is_finite() && c.phase.is_finite());
            if !numbers.into_iter().all(|v| v.is_finite()) || !cos_ok {
                return Err(Error::InvalidUtility(format!("piece {i} has a non-finite parameter")));
            }
            if p.from >= p.to {
                return Err(Error::InvalidUtility(format!("piece {i} has empty interval [{}, {}]", p.from, p.to)));
            }
            if p.coefficients.is_empty() || p.degree() > MAX_DEGREE {
                return Err(Error::InvalidUtility(format!(
                    "piece {i} needs between 1 and {} coefficients",
                    MAX_DEGREE + 1
                )));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if (w[0].to - w[1].from).abs() > PROB_TOL {
                return Err(Error::InvalidUtility(format!(
                    "gap or overlap between pieces {i} and {}: {} vs {}",
                    i + 1,
                    w[0].to,
                    w[1].from
                )));
            }
            let jump = (w[0].eval(w[0].to) - w[1].eval(w[1].from)).abs();
            if continuous && jump > CONTINUITY_TOL {
                return Err(Error::InvalidUtility(format!(
                    "declared continuous but jumps by {jump} at {}",
                    w[0].to
                )));
            }
        }
        Ok(Self { pieces, continuous })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    /// Interior junctions between pieces.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.from).collect()
    }

    /// Index of the piece evaluated at `x` (left piece at shared endpoints).
    pub fn piece_index(&self, x: f64) -> usize {
        self.pieces.iter().position(|p| x <= p.to).unwrap_or(self.pieces.len() - 1)
    }

    fn eval_scalar<S: Scalar>(&self, x: &S) -> Result<S> {
        let idx = self
            .pieces
            .iter()
            .position(|p| *x <= S::from_f64(p.to))
            .unwrap_or(self.pieces.len() - 1);
        self.pieces[idx].eval_scalar(x)
    }
}

/// Values at grid points, interpolated linearly (binary) or over the
/// Freudenthal triangulation of a simplex mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSampled {
    grid: BeliefGrid,
    values: Vec<f64>,
    mesh: Option<Mesh>,
}

#[derive(Debug, Clone, PartialEq)]
struct Mesh {
    resolution: u32,
    index: BTreeMap<Vec<u32>, usize>,
}

impl GridSampled {
    pub fn new(grid: BeliefGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidUtility(format!("{} grid points but {} values", grid.len(), values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidUtility(format!("value {i} is not finite")));
        }
        if !grid.contains_vertices() {
            return Err(Error::InvalidUtility("sampled utilities need every simplex vertex on the grid".into()));
        }
        let mesh = if grid.states() == 2 {
            None
        } else {
            let GridKind::Simplex { resolution } = *grid.kind() else {
                return Err(Error::InvalidUtility("sampled utilities over 3 or more states need a simplex mesh grid".into()));
            };
            let r = resolution as f64;
            let index = grid
                .points()
                .iter()
                .enumerate()
                .map(|(i, b)| (b.reduced().iter().map(|c| (c * r).round() as u32).collect(), i))
                .collect();
            Some(Mesh { resolution, index })
        };
        Ok(Self { grid, values, mesh })
    }

    pub fn grid(&self) -> &BeliefGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn eval_scalar<S: Scalar>(&self, reduced: &[S]) -> Result<S> {
        match &self.mesh {
            None => self.eval_binary(&reduced[0]),
            Some(mesh) => self.eval_mesh(mesh, reduced),
        }
    }

    fn eval_binary<S: Scalar>(&self, x: &S) -> Result<S> {
        let pts = self.grid.points();
        let xf = x.to_f64();
        if let Some(i) = pts.iter().position(|b| (b.x() - xf).abs() <= PROB_TOL) {
            if S::EXACT && S::from_f64(pts[i].x()) != *x {
                // fall through to interpolation on the exact value
            } else {
                return Ok(S::from_f64(self.values[i]));
            }
        }
        let hi = pts.iter().position(|b| S::from_f64(b.x()) >= *x).unwrap_or(pts.len() - 1).max(1);
        let (x0, x1) = (S::from_f64(pts[hi - 1].x()), S::from_f64(pts[hi].x()));
        let (v0, v1) = (S::from_f64(self.values[hi - 1]), S::from_f64(self.values[hi]));
        let t = (x.clone() - x0.clone()) / (x1 - x0);
        Ok(v0.clone() + t * (v1 - v0))
    }

    fn eval_mesh<S: Scalar>(&self, mesh: &Mesh, reduced: &[S]) -> Result<S> {
        let d = reduced.len();
        let r = S::from_usize(mesh.resolution as usize);
        // cumulative coordinates z_j = R * sum_{m >= j} reduced_m, non-increasing in j
        let mut z = vec![S::zero(); d];
        let mut acc = S::zero();
        for j in (0..d).rev() {
            acc = acc + reduced[j].clone() * r.clone();
            z[j] = snap(acc.clone());
        }
        let base: Vec<i64> = z.iter().map(floor_int).collect();
        let frac: Vec<S> = z.iter().zip(&base).map(|(zj, b)| zj.clone() - S::from_ratio(*b, 1)).collect();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| frac[b].partial_cmp(&frac[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        let mut vertex = base.clone();
        let mut total = S::zero();
        let mut previous = S::one();
        for m in 0..=d {
            let next = if m < d { frac[order[m]].clone() } else { S::zero() };
            let lambda = previous - next.clone();
            if lambda > S::zero() {
                total = total + lambda * S::from_f64(self.values[self.mesh_index(mesh, &vertex)?]);
            }
            if m < d {
                vertex[order[m]] += 1;
            }
            previous = next;
        }
        Ok(total)
    }

    fn mesh_index(&self, mesh: &Mesh, z: &[i64]) -> Result<usize> {
        let d = z.len();
        let counts: Option<Vec<u32>> = (0..d)
            .map(|j| {
                let next = if j + 1 < d { z[j + 1] } else { 0 };
                u32::try_from(z[j] - next).ok()
            })
            .collect();
        counts
            .and_then(|c| mesh.index.get(&c).copied())
            .ok_or_else(|| Error::OutOfDomain(format!("mesh vertex {z:?}")))
    }
}

fn snap<S: Scalar>(y: S) -> S {
    if S::EXACT {
        return y;
    }
    let f = y.to_f64();
    if (f - f.round()).abs() < 1e-9 {
        S::from_ratio(f.round() as i64, 1)
    } else {
        y
    }
}

fn floor_int<S: Scalar>(y: &S) -> i64 {
    let mut f = y.to_f64().floor() as i64;
    while S::from_ratio(f, 1) > *y {
        f -= 1;
    }
    while S::from_ratio(f + 1, 1) <= *y {
        f += 1;
    }
    f
}

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityFunction {
    Piecewise(PiecewiseClosedForm),
    Sampled(GridSampled),
    Constant { states: usize, value: f64 },
}

impl UtilityFunction {
    pub fn piecewise(pieces: Vec<Piece>, continuous: bool) -> Result<Self> {
        Ok(Self::Piecewise(PiecewiseClosedForm::new(pieces, continuous)?))
    }

    pub fn sampled(grid: BeliefGrid, values: Vec<f64>) -> Result<Self> {
        Ok(Self::Sampled(GridSampled::new(grid, values)?))
    }

    /// Binary sampled utility from `(x, value)` knots.
    pub fn sampled_binary(knots: &[(f64, f64)]) -> Result<Self> {
        let mut knots = knots.to_vec();
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        let grid = BeliefGrid::binary(&knots.iter().map(|k| k.0).collect::<Vec<_>>())?;
        Self::sampled(grid, knots.iter().map(|k| k.1).collect())
    }

    pub fn constant(states: usize, value: f64) -> Self {
        Self::Constant { states, value }
    }

    /// Binary polynomial `sum_k c_k x^k` on all of `[0, 1]`.
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        Self::piecewise(vec![Piece::polynomial(0.0, 1.0, 0.0, coefficients)], true)
    }

    pub fn states(&self) -> usize {
        match self {
            Self::Piecewise(_) => 2,
            Self::Sampled(s) => s.grid.states(),
            Self::Constant { states, .. } => *states,
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            Self::Piecewise(p) => p.continuous,
            _ => true,
        }
    }

    pub fn as_piecewise(&self) -> Option<&PiecewiseClosedForm> {
        match self {
            Self::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&GridSampled> {
        match self {
            Self::Sampled(s) => Some(s),
            _ => None,
        }
    }

    pub fn eval(&self, q: &Belief) -> Result<f64> {
        if q.states() != self.states() {
            return Err(Error::DimensionMismatch(format!(
                "utility over {} states evaluated at a belief over {}",
                self.states(),
                q.states()
            )));
        }
        self.eval_reduced::<f64>(q.reduced())
    }

    /// Binary shorthand for `eval` at the probability `x` of state 1.
    pub fn eval_x(&self, x: f64) -> Result<f64> {
        if self.states() != 2 {
            return Err(Error::DimensionMismatch("binary evaluation of a non-binary utility".into()));
        }
        self.eval_reduced::<f64>(&[x])
    }

    /// Evaluation in any scalar type at reduced coordinates.
    pub fn eval_reduced<S: Scalar>(&self, reduced: &[S]) -> Result<S> {
        let dims = self.states() - 1;
        if reduced.len() != dims {
            return Err(Error::DimensionMismatch(format!("expected {dims} coordinates, got {}", reduced.len())));
        }
        let lo = S::from_f64(-PROB_TOL);
        let hi = S::one() + S::from_f64(PROB_TOL);
        let total = reduced.iter().fold(S::zero(), |a, c| a + c.clone());
        if reduced.iter().any(|c| *c < lo || *c > hi) || total > hi {
            return Err(Error::OutOfDomain(format!("{:?}", reduced.iter().map(Scalar::to_f64).collect::<Vec<_>>())));
        }
        let clamped: Vec<S> = reduced
            .iter()
            .map(|c| {
                if *c < S::zero() {
                    S::zero()
                } else if *c > S::one() {
                    S::one()
                } else {
                    c.clone()
                }
            })
            .collect();
        match self {
            Self::Piecewise(p) => p.eval_scalar(&clamped[0]),
            Self::Sampled(s) => s.eval_scalar(&clamped),
            Self::Constant { value, .. } => Ok(S::from_f64(*value)),
        }
    }

    /// Values at every grid point, in grid order.
    pub fn values_on<S: Scalar>(&self, grid: &BeliefGrid) -> Result<Vec<S>> {
        grid.points()
            .iter()
            .map(|b| {
                let reduced: Vec<S> = b.reduced().iter().map(|&c| S::from_f64(c)).collect();
                self.eval_reduced(&reduced)
            })
            .collect()
    }

    /// Points where the binary closed form or interpolant changes formula.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Piecewise(p) => p.breakpoints(),
            Self::Sampled(s) if s.grid.states() == 2 => s.grid.xs(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueAtBelief {
    pub belief: Belief,
    pub value: f64,
}

impl ValueAtBelief {
    pub fn new(belief: Belief, value: f64) -> Self {
        Self { belief, value }
    }

    pub fn binary(x: f64, value: f64) -> Result<Self> {
        Ok(Self { belief: Belief::binary(x)?, value })
    }
}

pub fn expected_utility(u: &UtilityFunction, mu: &FiniteBeliefDistribution) -> Result<f64> {
    mu.iter().try_fold(0.0, |acc, (b, w)| Ok(acc + w * u.eval(b)?))
}

/// Smallest `sum_k alpha_k value_k` over convex weights with
/// `sum_k alpha_k belief_k = query`.
pub fn lower_convex_envelope(points: &[ValueAtBelief], query: &Belief) -> Result<f64> {
    Ok(lower_envelope_weights(points, query)?.0)
}

/// Value and minimizing mixture `(point index, weight)`.
pub fn lower_envelope_weights(points: &[ValueAtBelief], query: &Belief) -> Result<(f64, Vec<(usize, f64)>)> {
    check_points(points, query)?;
    if query.is_binary() {
        let xs: Vec<f64> = points.iter().map(|p| p.belief.x()).collect();
        let vs: Vec<f64> = points.iter().map(|p| p.value).collect();
        lower_hull_1d(&xs, &vs, query.x())
    } else {
        lower_envelope_lp_weights(points, query)
    }
}

/// LP formulation of [`lower_convex_envelope`] for any state count.
pub fn lower_convex_envelope_lp(points: &[ValueAtBelief], query: &Belief) -> Result<f64> {
    check_points(points, query)?;
    Ok(lower_envelope_lp_weights(points, query)?.0)
}

fn check_points(points: &[ValueAtBelief], query: &Belief) -> Result<()> {
    if points.is_empty() {
        return Err(Error::OutsideHull(format!("{:?} (no points)", query.reduced())));
    }
    if points.iter().any(|p| p.belief.states() != query.states()) {
        return Err(Error::DimensionMismatch("points and query have different state counts".into()));
    }
    if let Some(p) = points.iter().find(|p| !p.value.is_finite()) {
        return Err(Error::InvalidUtility(format!("non-finite value at {:?}", p.belief.reduced())));
    }
    Ok(())
}

fn lower_envelope_lp_weights(points: &[ValueAtBelief], query: &Belief) -> Result<(f64, Vec<(usize, f64)>)> {
    let n = points.len();
    let dims = query.states() - 1;
    let mut rows = vec![vec![1.0; n]];
    let mut rhs = vec![1.0];
    for d in 0..dims {
        rows.push(points.iter().map(|p| p.belief.reduced()[d]).collect());
        rhs.push(query.reduced()[d]);
    }
    let objective = points.iter().map(|p| -p.value).collect();
    let res = solve_lp(&LpProblem::new(objective, rows, rhs))?;
    match res.status {
        LpStatus::Optimal => {
            let weights = res.solution.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, w)| (i, *w)).collect();
            Ok((-res.value, weights))
        }
        LpStatus::Infeasible => Err(Error::OutsideHull(format!("{:?}", query.reduced()))),
        LpStatus::Unbounded => Err(Error::LpFailure("envelope LP unbounded".into())),
    }
}

/// Lower hull of `(xs, vs)` at `q`, with the supporting mixture.
pub(crate) fn lower_hull_1d(xs: &[f64], vs: &[f64], q: f64) -> Result<(f64, Vec<(usize, f64)>)> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(vs[a].total_cmp(&vs[b])).then(a.cmp(&b)));
    idx.dedup_by(|b, a| xs[*a] == xs[*b]);
    let (lo, hi) = (xs[idx[0]], xs[*idx.last().expect("nonempty")]);
    if q < lo - PROB_TOL || q > hi + PROB_TOL {
        return Err(Error::OutsideHull(format!("{q} not in [{lo}, {hi}]")));
    }
    let q = q.clamp(lo, hi);
    let mut hull: Vec<usize> = Vec::new();
    for &i in &idx {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (xs[b] - xs[a]) * (vs[i] - vs[a]) - (vs[b] - vs[a]) * (xs[i] - xs[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    if let Some(&i) = hull.iter().find(|&&i| xs[i] == q) {
        return Ok((vs[i], vec![(i, 1.0)]));
    }
    let k = hull.iter().position(|&i| xs[i] > q).expect("q inside hull range");
    let (a, b) = (hull[k - 1], hull[k]);
    let wb = (q - xs[a]) / (xs[b] - xs[a]);
    let wa = (xs[b] - q) / (xs[b] - xs[a]);
    Ok((wa * vs[a] + wb * vs[b], vec![(a, wa), (b, wb)]))
}

/// Upper concave envelope of `u` restricted to the grid, at `p`.
pub fn concavify_unconstrained(u: &UtilityFunction, grid: &BeliefGrid, p: &Belief) -> Result<f64> {
    Ok(concavify_with_distribution(u, grid, p)?.0)
}

/// Concavification value and a distribution on grid points attaining it.
pub fn concavify_with_distribution(
    u: &UtilityFunction,
    grid: &BeliefGrid,
    p: &Belief,
) -> Result<(f64, FiniteBeliefDistribution)> {
    let values = u.values_on::<f64>(grid)?;
    let points: Vec<ValueAtBelief> =
        grid.points().iter().zip(&values).map(|(b, v)| ValueAtBelief::new(b.clone(), -v)).collect();
    let (neg, mix) = lower_envelope_weights(&points, p)?;
    let support = mix.iter().map(|(i, _)| grid.points()[*i].clone()).collect();
    let total: f64 = mix.iter().map(|m| m.1).sum();
    let dist = FiniteBeliefDistribution::new(support, mix.iter().map(|m| m.1 / total).collect())?;
    Ok((-neg, dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn three_signal_sender() -> UtilityFunction {
        UtilityFunction::piecewise(
            vec![
                Piece::polynomial(0.0, 0.5, 0.0, vec![0.0, 0.0, 0.0, 0.0, 96.0]),
                Piece::polynomial(0.5, 1.0, 1.0, vec![0.0, 0.0, 0.0, 0.0, 96.0]),
            ],
            true,
        )
        .unwrap()
    }

    fn three_signal_first() -> UtilityFunction {
        UtilityFunction::piecewise(
            vec![
                Piece::polynomial(0.0, 0.25, 0.0, vec![0.0, 0.0, 16.0]),
                Piece::polynomial(0.25, 0.5, 0.5, vec![0.0, 0.0, 16.0]),
                Piece::polynomial(0.5, 1.0, 0.5, vec![0.0, 0.0, 24.0]),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn closed_form_values() {
        let s = three_signal_sender();
        assert_eq!(s.eval_x(0.5).unwrap(), 6.0);
        assert_eq!(s.eval_x(0.25).unwrap(), 0.375);
        let m = three_signal_first();
        assert_eq!(m.eval_x(0.25).unwrap(), 1.0);
        assert_eq!(m.eval_x(1.0).unwrap(), 6.0);
        assert_eq!(6.0 * m.eval_x(0.25).unwrap(), m.eval_x(1.0).unwrap());
        assert_eq!(UtilityFunction::constant(2, 3.5).eval_x(0.7).unwrap(), 3.5);
        assert!(matches!(s.eval_x(1.5), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn exact_evaluation() {
        let s = three_signal_sender();
        let v = s.eval_reduced(&[Rational::from_ratio(1, 4)]).unwrap();
        assert_eq!(v, Rational::from_ratio(3, 8));
        let c = UtilityFunction::piecewise(
            vec![Piece::polynomial(0.0, 1.0, 0.0, vec![1.0]).with_cosine(1.0, 3.0, 0.0)],
            true,
        )
        .unwrap();
        assert!(matches!(c.eval_reduced(&[Rational::from_ratio(1, 4)]), Err(Error::Unsupported(_))));
        assert!((c.eval_x(0.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let gap = vec![Piece::polynomial(0.0, 0.4, 0.0, vec![0.0]), Piece::polynomial(0.5, 1.0, 0.0, vec![0.0])];
        assert!(UtilityFunction::piecewise(gap, false).is_err());
        let jump = vec![Piece::polynomial(0.0, 0.5, 0.0, vec![0.0]), Piece::polynomial(0.5, 1.0, 0.0, vec![1.0])];
        assert!(UtilityFunction::piecewise(jump.clone(), true).is_err());
        let u = UtilityFunction::piecewise(jump, false).unwrap();
        assert!(!u.is_continuous());
        assert_eq!(u.eval_x(0.5).unwrap(), 0.0, "left piece wins at a shared endpoint");
        assert_eq!(u.eval_x(0.5000001).unwrap(), 1.0);
        let deep = vec![Piece::polynomial(0.0, 1.0, 0.0, vec![0.0; 8])];
        assert!(UtilityFunction::piecewise(deep, true).is_err());
    }

    #[test]
    fn expectations() {
        let star = FiniteBeliefDistribution::binary(&[(0.0, 2.0 / 3.0), (0.5, 1.0 / 6.0), (1.0, 1.0 / 6.0)]).unwrap();
        assert!((expected_utility(&three_signal_sender(), &star).unwrap() - 1.0).abs() < 1e-12);
        assert!((expected_utility(&UtilityFunction::constant(2, 1.0), &star).unwrap() - 1.0).abs() < 1e-15);
        let m = three_signal_first();
        for w1 in [0.0, 1.0 / 6.0, 0.25] {
            let w5 = (0.25 - w1) / 0.5;
            let mu = FiniteBeliefDistribution::binary(&[(0.0, 1.0 - w1 - w5), (0.5, w5), (1.0, w1)]).unwrap();
            assert!((expected_utility(&m, &mu).unwrap() - 6.0 * w1).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_examples() {
        let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| ValueAtBelief::binary(x, y).unwrap()).collect::<Vec<_>>();
        let q = |x| Belief::binary(x).unwrap();
        assert_eq!(lower_convex_envelope(&pts(&[(0.0, 1.0), (1.0, 1.0)]), &q(0.5)).unwrap(), 1.0);
        assert_eq!(lower_convex_envelope(&pts(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]), &q(0.5)).unwrap(), 0.0);
        let m2 = pts(&[(0.0, 1.0), (0.25, 0.0), (0.5, 1.0)]);
        assert!((lower_convex_envelope(&m2, &q(0.375)).unwrap() - 0.5).abs() < 1e-12);
        assert!((lower_convex_envelope_lp(&m2, &q(0.375)).unwrap() - 0.5).abs() < 1e-9);
        assert!(matches!(lower_convex_envelope(&m2, &q(0.75)), Err(Error::OutsideHull(_))));
        assert!(matches!(lower_convex_envelope_lp(&m2, &q(0.75)), Err(Error::OutsideHull(_))));
    }

    #[test]
    fn concavification() {
        let grid = BeliefGrid::uniform(0.01).unwrap();
        let concave = UtilityFunction::polynomial(vec![0.0, 1.0, -1.0]).unwrap();
        let p = Belief::binary(0.3).unwrap();
        assert!((concavify_unconstrained(&concave, &grid, &p).unwrap() - 0.21).abs() < 1e-12);
        let peak = UtilityFunction::sampled_binary(&[(0.0, 0.0), (0.4, 2.0), (1.0, 0.0)]).unwrap();
        let g = BeliefGrid::binary(&[0.0, 0.4, 1.0]).unwrap();
        assert_eq!(concavify_unconstrained(&peak, &g, &Belief::binary(0.4).unwrap()).unwrap(), 2.0);
        let convex = UtilityFunction::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let (v, d) = concavify_with_distribution(&convex, &grid, &p).unwrap();
        assert!((v - 0.3).abs() < 1e-12);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn ternary_mesh_interpolation() {
        let grid = BeliefGrid::simplex(3, 2).unwrap();
        // linear function 1 + 2 q1 + 3 q2 is reproduced exactly
        let values: Vec<f64> = grid.points().iter().map(|b| 1.0 + 2.0 * b.coord(1) + 3.0 * b.coord(2)).collect();
        let u = UtilityFunction::sampled(grid.clone(), values.clone()).unwrap();
        for (b, v) in grid.points().iter().zip(&values) {
            assert_eq!(u.eval(b).unwrap(), *v);
        }
        let q = Belief::new(&[0.2, 0.3, 0.5]).unwrap();
        assert!((u.eval(&q).unwrap() - (1.0 + 0.6 + 1.5)).abs() < 1e-12);
        let exact = u.eval_reduced(&[Rational::from_ratio(3, 10), Rational::from_ratio(1, 2)]).unwrap();
        assert_eq!(exact, Rational::from_ratio(31, 10));
        let explicit = BeliefGrid::explicit(grid.points().to_vec()).unwrap();
        assert!(UtilityFunction::sampled(explicit, values).is_err());
    }
}
