//! Finite lattice of rational-weight belief distributions with a fixed mean.

use std::cmp::Ordering;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{Belief, BeliefGrid, FiniteBeliefDistribution, Prior};
use crate::config::{Execution, SolverConfig};
use crate::error::{Error, Result};
use crate::order::{call_profile, coupling_feasible};
use crate::par;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeElement<S = f64> {
    /// Ascending grid indices with positive weight.
    pub support: Vec<usize>,
    pub weights: Vec<S>,
}

impl<S: Scalar> LatticeElement<S> {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        for ((a, wa), (b, wb)) in self.support.iter().zip(&self.weights).zip(other.support.iter().zip(&other.weights)) {
            let o = a.cmp(b).then_with(|| wa.partial_cmp(wb).unwrap_or(Ordering::Equal));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.support.len().cmp(&other.support.len())
    }

    /// Same support and weights equal up to the scalar tolerance.
    fn same_as(&self, other: &Self) -> bool {
        self.support == other.support && self.weights.iter().zip(&other.weights).all(|(a, b)| a.approx_eq(b))
    }

    /// `sum_k weight_k * values[support_k]`.
    pub fn expectation(&self, values: &[S]) -> S {
        self.support
            .iter()
            .zip(&self.weights)
            .fold(S::zero(), |acc, (&i, w)| acc + w.clone() * values[i].clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeOptions {
    pub cap: usize,
    /// Append the full-information distribution when its weights are not
    /// multiples of `1 / Q`. Requires every simplex vertex on the grid.
    pub include_full_information: bool,
    pub execution: Execution,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        Self::from_config(&SolverConfig::default())
    }
}

impl LatticeOptions {
    pub fn from_config(config: &SolverConfig) -> Self {
        Self { cap: config.lattice_cap, include_full_information: false, execution: config.execution }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDiagnostics {
    pub grid_points: usize,
    pub denominator: u32,
    pub elements: usize,
    /// Pairs `nu ⪯ mu` with `nu != mu`.
    pub order_edges: usize,
    pub max_support: usize,
    pub full_information_appended: bool,
}

#[derive(Debug, Clone)]
pub struct DistributionLattice<S = f64> {
    grid: BeliefGrid,
    points: Vec<Vec<S>>,
    denominator: u32,
    prior: Prior,
    elements: Vec<LatticeElement<S>>,
    /// `down[a][b]` iff element `b ⪯ a`.
    down: Vec<BitVec>,
    full_information: Option<usize>,
    full_information_appended: bool,
}

/// All distributions on `grid` with weights in multiples of `1 / denominator`
/// and mean `prior`, ordered by the convex order.
pub fn enumerate_lattice(grid: &BeliefGrid, denominator: u32, prior: &Prior) -> Result<DistributionLattice> {
    enumerate_lattice_with(grid, denominator, prior, &LatticeOptions::default())
}

pub fn enumerate_lattice_with<S: Scalar>(
    grid: &BeliefGrid,
    denominator: u32,
    prior: &Prior,
    options: &LatticeOptions,
) -> Result<DistributionLattice<S>> {
    if denominator == 0 {
        return Err(Error::InvalidGrid("denominator must be at least 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if grid.states() != prior.states() {
        return Err(Error::DimensionMismatch(format!(
            "grid over {} states, prior over {}",
            grid.states(),
            prior.states()
        )));
    }
    let points: Vec<Vec<S>> = grid
        .points()
        .iter()
        .map(|b| b.reduced().iter().map(|&c| S::from_f64(c)).collect())
        .collect();
    let target: Vec<S> = prior.belief.reduced().iter().map(|&c| S::from_f64(c)).collect();
    let mut counts = enumerate_counts(&points, &target, denominator, options.cap)?;
    if counts.is_empty() {
        return Err(not_representable(grid, prior, denominator));
    }
    let q = denominator as i64;
    let mut elements: Vec<LatticeElement<S>> = counts
        .drain(..)
        .map(|c| {
            let support: Vec<usize> = (0..c.len()).filter(|&i| c[i] > 0).collect();
            let weights = support.iter().map(|&i| S::from_ratio(c[i] as i64, q)).collect();
            LatticeElement { support, weights }
        })
        .collect();

    let mut full_information_appended = false;
    if options.include_full_information {
        let full = full_information_element(grid, &target)?;
        if !elements.iter().any(|e| e.same_as(&full)) {
            if elements.len() >= options.cap {
                return Err(Error::LatticeCap { cap: options.cap });
            }
            elements.push(full);
            full_information_appended = true;
        }
    }
    elements.sort_by(|a, b| a.canonical_cmp(b));

    let full_information = if grid.contains_vertices() {
        let full = full_information_element(grid, &target)?;
        elements.iter().position(|e| e.same_as(&full))
    } else {
        None
    };
    let down = build_order(&points, &elements, options.execution)?;
    Ok(DistributionLattice {
        grid: grid.clone(),
        points,
        denominator,
        prior: prior.clone(),
        elements,
        down,
        full_information,
        full_information_appended,
    })
}

fn full_information_element<S: Scalar>(grid: &BeliefGrid, target: &[S]) -> Result<LatticeElement<S>> {
    let k = grid.states();
    let rest = target.iter().fold(S::one(), |acc, c| acc - c.clone());
    let mut pairs: Vec<(usize, S)> = Vec::with_capacity(k);
    for v in 0..k {
        let idx = grid.index_of(&Belief::vertex(k, v)).ok_or_else(|| {
            Error::InvalidGrid("the full-information distribution needs every simplex vertex on the grid".into())
        })?;
        let w = if v == 0 { rest.clone() } else { target[v - 1].clone() };
        if w > S::zero() {
            pairs.push((idx, w));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (support, weights) = pairs.into_iter().unzip();
    Ok(LatticeElement { support, weights })
}

fn not_representable(grid: &BeliefGrid, prior: &Prior, denominator: u32) -> Error {
    let coords = prior.belief.coordinates();
    let k = coords.len();
    let order = (1..k).chain(std::iter::once(0));
    for c in order {
        let projected: Vec<Vec<f64>> = grid.points().iter().map(|b| vec![b.coord(c)]).collect();
        let reachable = enumerate_counts(&projected, &[coords[c]], denominator, 1).map(|v| !v.is_empty());
        if !matches!(reachable, Ok(true)) {
            return Error::PriorNotRepresentable { coordinate: c, value: coords[c], denominator };
        }
    }
    Error::PriorNotRepresentable { coordinate: 1, value: coords[1], denominator }
}

/// Count vectors `c` with `sum c = q` and `sum c_i points_i = q * target`.
fn enumerate_counts<S: Scalar>(points: &[Vec<S>], target: &[S], q: u32, cap: usize) -> Result<Vec<Vec<u32>>> {
    let n = points.len();
    let dims = target.len();
    let qs = S::from_usize(q as usize);
    let goal: Vec<S> = target.iter().map(|t| t.clone() * qs.clone()).collect();
    let slack = S::tolerance() * qs.clone();
    let pf: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(Scalar::to_f64).collect()).collect();
    let mut suffix_min = vec![vec![f64::INFINITY; dims]; n + 1];
    let mut suffix_max = vec![vec![f64::NEG_INFINITY; dims]; n + 1];
    for i in (0..n).rev() {
        for d in 0..dims {
            suffix_min[i][d] = suffix_min[i + 1][d].min(pf[i][d]);
            suffix_max[i][d] = suffix_max[i + 1][d].max(pf[i][d]);
        }
    }
    let state = Search {
        points,
        goal: &goal,
        goal_f: goal.iter().map(Scalar::to_f64).collect(),
        slack,
        prune_slack: 1e-7 * q as f64,
        suffix_min,
        suffix_max,
        cap,
    };
    let mut out = Vec::new();
    let mut counts = vec![0u32; n];
    let acc = vec![S::zero(); dims];
    state.dfs(0, q, &acc, &mut counts, &mut out)?;
    Ok(out)
}

struct Search<'a, S> {
    points: &'a [Vec<S>],
    goal: &'a [S],
    goal_f: Vec<f64>,
    slack: S,
    prune_slack: f64,
    suffix_min: Vec<Vec<f64>>,
    suffix_max: Vec<Vec<f64>>,
    cap: usize,
}

impl<S: Scalar> Search<'_, S> {
    fn dfs(&self, idx: usize, remaining: u32, acc: &[S], counts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) -> Result<()> {
        let n = self.points.len();
        if remaining == 0 || idx == n {
            if remaining == 0 && acc.iter().zip(self.goal).all(|(a, g)| (a.clone() - g.clone()).abs() <= self.slack) {
                if out.len() >= self.cap {
                    return Err(Error::LatticeCap { cap: self.cap });
                }
                out.push(counts.clone());
            }
            return Ok(());
        }
        let r = remaining as f64;
        for d in 0..acc.len() {
            let need = self.goal_f[d] - acc[d].to_f64();
            if need < r * self.suffix_min[idx][d] - self.prune_slack || need > r * self.suffix_max[idx][d] + self.prune_slack {
                return Ok(());
            }
        }
        let upto = if idx + 1 == n { remaining..=remaining } else { 0..=remaining };
        for c in upto {
            counts[idx] = c;
            let next: Vec<S> = if c == 0 {
                acc.to_vec()
            } else {
                let cs = S::from_usize(c as usize);
                acc.iter().zip(&self.points[idx]).map(|(a, p)| a.clone() + cs.clone() * p.clone()).collect()
            };
            self.dfs(idx + 1, remaining - c, &next, counts, out)?;
        }
        counts[idx] = 0;
        Ok(())
    }
}

fn build_order<S: Scalar>(points: &[Vec<S>], elements: &[LatticeElement<S>], execution: Execution) -> Result<Vec<BitVec>> {
    let n = elements.len();
    if points[0].len() == 1 {
        let xs: Vec<S> = points.iter().map(|p| p[0].clone()).collect();
        let profiles: Vec<Vec<S>> = par::map_slice(execution, elements, |e| {
            let ex: Vec<S> = e.support.iter().map(|&i| xs[i].clone()).collect();
            call_profile(&ex, &e.weights, &xs)
        });
        let tol = S::tolerance();
        Ok(par::map_range(execution, n, |a| {
            let mut row = bitvec![0; n];
            for b in 0..n {
                if b == a || profiles[b].iter().zip(&profiles[a]).all(|(pb, pa)| *pb <= pa.clone() + tol.clone()) {
                    row.set(b, true);
                }
            }
            row
        }))
    } else {
        let supp = |e: &LatticeElement<S>| e.support.iter().map(|&i| points[i].clone()).collect::<Vec<_>>();
        let rows: Vec<Result<BitVec>> = par::map_range(execution, n, |a| {
            let mut row = bitvec![0; n];
            let mu_pts = supp(&elements[a]);
            for b in 0..n {
                if b == a || coupling_feasible(&supp(&elements[b]), &elements[b].weights, &mu_pts, &elements[a].weights, S::tolerance())? {
                    row.set(b, true);
                }
            }
            Ok(row)
        });
        rows.into_iter().collect()
    }
}

impl<S: Scalar> DistributionLattice<S> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn grid(&self) -> &BeliefGrid {
        &self.grid
    }

    /// Grid points as scalars, reduced coordinates.
    pub fn scalar_points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn elements(&self) -> &[LatticeElement<S>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &LatticeElement<S> {
        &self.elements[i]
    }

    /// `b ⪯ a`.
    pub fn precedes(&self, b: usize, a: usize) -> bool {
        self.down[a][b]
    }

    /// Elements below `a` (including `a`).
    pub fn down_set(&self, a: usize) -> &BitSlice {
        &self.down[a]
    }

    pub fn order_rows(&self) -> &[BitVec] {
        &self.down
    }

    pub fn order_edges(&self) -> usize {
        self.down.iter().map(|r| r.count_ones()).sum::<usize>() - self.len()
    }

    /// Index of the full-information distribution, if it is an element.
    pub fn full_information(&self) -> Option<usize> {
        self.full_information
    }

    pub fn full_information_appended(&self) -> bool {
        self.full_information_appended
    }

    /// Index of the point mass at the prior, if the prior is a grid point.
    pub fn prior_point_mass(&self) -> Option<usize> {
        let g = self.grid.index_of(&self.prior.belief)?;
        self.elements.iter().position(|e| e.support == [g])
    }

    pub fn distribution(&self, i: usize) -> FiniteBeliefDistribution {
        let e = &self.elements[i];
        let support = e.support.iter().map(|&g| self.grid.points()[g].clone()).collect();
        let weights = e.weights.iter().map(Scalar::to_f64).collect::<Vec<f64>>();
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        FiniteBeliefDistribution::new(support, weights).expect("lattice elements are distributions")
    }

    /// Index of the element equal to `dist` (weights within 1e-9).
    pub fn find(&self, dist: &FiniteBeliefDistribution) -> Option<usize> {
        let idx: Option<Vec<usize>> = dist.support().iter().map(|b| self.grid.index_of(b)).collect();
        let idx = idx?;
        self.elements.iter().position(|e| {
            e.support == idx && e.weights.iter().zip(dist.weights()).all(|(a, b)| (a.to_f64() - b).abs() <= 1e-9)
        })
    }

    pub fn diagnostics(&self) -> LatticeDiagnostics {
        LatticeDiagnostics {
            grid_points: self.grid.len(),
            denominator: self.denominator,
            elements: self.len(),
            order_edges: self.order_edges(),
            max_support: self.elements.iter().map(|e| e.support.len()).max().unwrap_or(0),
            full_information_appended: self.full_information_appended,
        }
    }

    /// Reflexivity, antisymmetry and transitivity of the stored relation.
    pub fn audit_order(&self) -> Result<()> {
        audit_partial_order(&self.down)
    }
}

pub(crate) fn audit_partial_order(down: &[BitVec]) -> Result<()> {
    let n = down.len();
    for a in 0..n {
        if down[a].len() != n {
            return Err(Error::OrderViolation(format!("row {a} has length {}", down[a].len())));
        }
        if !down[a][a] {
            return Err(Error::OrderViolation(format!("element {a} is not below itself")));
        }
        for b in down[a].iter_ones() {
            if b != a && down[b][a] {
                return Err(Error::OrderViolation(format!("elements {a} and {b} are mutually below each other")));
            }
            let outside = down[b].clone() & !down[a].clone();
            if let Some(c) = outside.first_one() {
                return Err(Error::OrderViolation(format!("{c} ⪯ {b} ⪯ {a} but not {c} ⪯ {a}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn grid(xs: &[f64]) -> BeliefGrid {
        BeliefGrid::binary(xs).unwrap()
    }

    #[test]
    fn binary_extremes() {
        let l = enumerate_lattice(&grid(&[0.0, 1.0]), 2, &Prior::binary(0.5).unwrap()).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.distribution(0), FiniteBeliefDistribution::binary(&[(0.0, 0.5), (1.0, 0.5)]).unwrap());
    }

    #[test]
    fn three_point_grid() {
        let l = enumerate_lattice(&grid(&[0.0, 0.5, 1.0]), 2, &Prior::binary(0.5).unwrap()).unwrap();
        assert_eq!(l.len(), 2);
        let point = l.find(&FiniteBeliefDistribution::binary(&[(0.5, 1.0)]).unwrap()).unwrap();
        let spread = l.find(&FiniteBeliefDistribution::binary(&[(0.0, 0.5), (1.0, 0.5)]).unwrap()).unwrap();
        assert!(l.precedes(point, spread));
        assert!(!l.precedes(spread, point));
        assert_eq!(l.order_edges(), 1);
    }

    #[test]
    fn two_mediator_example_lattice() {
        let g = grid(&[0.0, 0.25, 0.5, 1.0]);
        let l = enumerate_lattice(&g, 6, &Prior::binary(0.25).unwrap()).unwrap();
        assert_eq!(l.len(), 6);
        let star = FiniteBeliefDistribution::binary(&[(0.0, 2.0 / 3.0), (0.5, 1.0 / 6.0), (1.0, 1.0 / 6.0)]).unwrap();
        assert!(l.find(&star).is_some());
        assert!(l.prior_point_mass().is_some());
        assert!(l.full_information().is_none());
        l.audit_order().unwrap();

        let opts = LatticeOptions { include_full_information: true, ..LatticeOptions::default() };
        let with_top = enumerate_lattice_with::<f64>(&g, 6, &Prior::binary(0.25).unwrap(), &opts).unwrap();
        assert_eq!(with_top.len(), 7);
        assert!(with_top.full_information_appended());
        let top = with_top.full_information().unwrap();
        assert!((0..7).all(|b| with_top.precedes(b, top)));
        with_top.audit_order().unwrap();

        let exact = enumerate_lattice_with::<Rational>(&g, 6, &Prior::binary(0.25).unwrap(), &opts).unwrap();
        assert_eq!(exact.len(), 7);
        assert_eq!(exact.order_rows(), with_top.order_rows());
    }

    #[test]
    fn unrepresentable_prior_names_coordinate() {
        let err = enumerate_lattice(&grid(&[0.0, 0.25, 0.5, 1.0]), 6, &Prior::binary(0.3).unwrap()).unwrap_err();
        match err {
            Error::PriorNotRepresentable { coordinate, value, denominator } => {
                assert_eq!(coordinate, 1);
                assert_eq!(value, 0.3);
                assert_eq!(denominator, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().starts_with("prior not representable"));
    }

    #[test]
    fn cap_is_enforced() {
        let opts = LatticeOptions { cap: 3, ..LatticeOptions::default() };
        let g = BeliefGrid::uniform(0.25).unwrap();
        let err = enumerate_lattice_with::<f64>(&g, 8, &Prior::binary(0.5).unwrap(), &opts).unwrap_err();
        assert_eq!(err, Error::LatticeCap { cap: 3 });
    }

    #[test]
    fn ternary_lattice_order() {
        let g = BeliefGrid::simplex(3, 2).unwrap();
        let prior = Prior::new(&[0.5, 0.25, 0.25]).unwrap();
        let opts = LatticeOptions { include_full_information: true, ..LatticeOptions::default() };
        let l = enumerate_lattice_with::<f64>(&g, 4, &prior, &opts).unwrap();
        l.audit_order().unwrap();
        let top = l.full_information().unwrap();
        assert!((0..l.len()).all(|b| l.precedes(b, top)));
        let point = l.prior_point_mass();
        assert!(point.is_none(), "prior (1/2,1/4,1/4) is not on the resolution-2 mesh");
    }

    #[test]
    fn full_information_found_despite_rounding() {
        // 1 - 0.8 is not 1/5 in floating point.
        let grid = BeliefGrid::binary(&[0.0, 0.05, 0.8, 1.0]).unwrap();
        let options = LatticeOptions { include_full_information: true, ..LatticeOptions::default() };
        let l = enumerate_lattice_with::<f64>(&grid, 5, &Prior::binary(0.8).unwrap(), &options).unwrap();
        assert!(!l.full_information_appended());
        l.audit_order().unwrap();
    }

    #[test]
    fn sequential_and_parallel_orders_match() {
        let g = BeliefGrid::uniform(0.1).unwrap();
        let prior = Prior::binary(0.3).unwrap();
        let seq = LatticeOptions { execution: Execution::Sequential, ..LatticeOptions::default() };
        let a = enumerate_lattice_with::<f64>(&g, 6, &prior, &seq).unwrap();
        let b = enumerate_lattice(&g, 6, &prior).unwrap();
        assert_eq!(a.order_rows(), b.order_rows());
        assert_eq!(a.elements(), b.elements());
    }
}
