//! One mediator: the sender's value is the best mixture of at most `|Ω|`
//! posteriors that the mediator has no reason to garble.

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{Belief, BeliefGrid, FiniteBeliefDistribution, PROB_TOL};
use crate::config::SolverConfig;
use crate::domination::check_collection_with;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::par;
use crate::utility::{expected_utility, UtilityFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleSolveResult {
    pub value: f64,
    pub posteriors: Vec<Belief>,
    pub weights: Vec<f64>,
    pub used_no_information: bool,
    /// Set for three or more states, where only grid tuples are searched.
    pub approximate: bool,
}

impl SingleSolveResult {
    fn no_information(p: &Belief, value: f64, approximate: bool) -> Self {
        Self { value, posteriors: vec![p.clone()], weights: vec![1.0], used_no_information: true, approximate }
    }

    pub fn distribution(&self) -> FiniteBeliefDistribution {
        FiniteBeliefDistribution::new(self.posteriors.clone(), self.weights.clone()).expect("valid posterior mixture")
    }
}

pub fn solve_single(v_s: &UtilityFunction, v_m: &UtilityFunction, p: &Belief, grid: &BeliefGrid) -> Result<SingleSolveResult> {
    solve_single_with(v_s, v_m, p, grid, &SolverConfig::default())
}

pub fn solve_single_with(
    v_s: &UtilityFunction,
    v_m: &UtilityFunction,
    p: &Belief,
    grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<SingleSolveResult> {
    check_inputs(v_s, v_m, p, grid)?;
    if p.states() == 2 {
        let values = v_s.values_on::<f64>(grid)?;
        solve_binary(v_s, p, grid, &values, config, |i, j| {
            check_collection_with(v_m, &[grid.points()[i].clone(), grid.points()[j].clone()], config)
        })
    } else {
        solve_tuples(v_s, v_m, p, grid, config)
    }
}

fn check_inputs(v_s: &UtilityFunction, v_m: &UtilityFunction, p: &Belief, grid: &BeliefGrid) -> Result<()> {
    let k = p.states();
    if v_s.states() != k || v_m.states() != k || grid.states() != k {
        return Err(Error::DimensionMismatch("prior, grid and utilities must share the state count".into()));
    }
    Ok(())
}

/// Straddling pairs `g_i < p < g_j` that beat no information, best first.
fn candidates(p: f64, xs: &[f64], values: &[f64], base: f64) -> Vec<(f64, usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..xs.len() {
        if xs[i] >= p {
            continue;
        }
        for j in 0..xs.len() {
            if xs[j] <= p {
                continue;
            }
            let a = (xs[j] - p) / (xs[j] - xs[i]);
            let v = a * values[i] + (1.0 - a) * values[j];
            if v > base {
                out.push((v, i, j, a));
            }
        }
    }
    out.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    out
}

fn solve_binary<F>(
    v_s: &UtilityFunction,
    p: &Belief,
    grid: &BeliefGrid,
    values: &[f64],
    config: &SolverConfig,
    dominating: F,
) -> Result<SingleSolveResult>
where
    F: Fn(usize, usize) -> Result<bool> + Sync + Send,
{
    let xs = grid.xs();
    let x = p.x();
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    if x < lo - PROB_TOL || x > hi + PROB_TOL {
        return Err(Error::OutsideHull(format!("prior {x} not in [{lo}, {hi}]")));
    }
    let base = v_s.eval(p)?;
    let cands = candidates(x, &xs, values, base);
    let chunk = 256;
    for block in cands.chunks(chunk) {
        let verdicts = par::map_slice(config.execution, block, |c| dominating(c.1, c.2));
        for (c, ok) in block.iter().zip(verdicts) {
            if ok? {
                let (value, i, j, a) = *c;
                return Ok(SingleSolveResult {
                    value,
                    posteriors: vec![grid.points()[i].clone(), grid.points()[j].clone()],
                    weights: vec![a, 1.0 - a],
                    used_no_information: false,
                    approximate: false,
                });
            }
        }
    }
    Ok(SingleSolveResult::no_information(p, base, false))
}

/// Grid tuples of up to `|Ω|` points around `p`, checked best first.
fn solve_tuples(
    v_s: &UtilityFunction,
    v_m: &UtilityFunction,
    p: &Belief,
    grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<SingleSolveResult> {
    if p.states() != 3 {
        return Err(Error::Unsupported("tuple search is implemented for up to three states".into()));
    }
    let base = v_s.eval(p)?;
    let values = v_s.values_on::<f64>(grid)?;
    let pts = grid.points();
    let n = pts.len();
    let mut cands: Vec<(f64, Vec<usize>, Vec<f64>)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(w) = segment_weights(&pts[i], &pts[j], p) {
                cands.push((w[0] * values[i] + w[1] * values[j], vec![i, j], w));
            }
            for k in j + 1..n {
                if let Some(w) = triangle_weights(&pts[i], &pts[j], &pts[k], p) {
                    let v = w[0] * values[i] + w[1] * values[j] + w[2] * values[k];
                    cands.push((v, vec![i, j, k], w));
                }
            }
        }
    }
    cands.retain(|c| c.0 > base);
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)));
    for block in cands.chunks(64) {
        let verdicts = par::map_slice(config.execution, block, |c| {
            let bel: Vec<Belief> = c.1.iter().map(|&i| pts[i].clone()).collect();
            check_collection_with(v_m, &bel, config)
        });
        for (c, ok) in block.iter().zip(verdicts) {
            if ok? {
                return Ok(SingleSolveResult {
                    value: c.0,
                    posteriors: c.1.iter().map(|&i| pts[i].clone()).collect(),
                    weights: c.2.clone(),
                    used_no_information: false,
                    approximate: true,
                });
            }
        }
    }
    Ok(SingleSolveResult::no_information(p, base, true))
}

fn segment_weights(a: &Belief, b: &Belief, p: &Belief) -> Option<Vec<f64>> {
    let (ra, rb, rp) = (a.reduced(), b.reduced(), p.reduced());
    let d: Vec<f64> = ra.iter().zip(rb).map(|(x, y)| y - x).collect();
    let norm: f64 = d.iter().map(|v| v * v).sum();
    if norm == 0.0 {
        return None;
    }
    let t: f64 = d.iter().zip(ra.iter().zip(rp)).map(|(dv, (x, q))| dv * (q - x)).sum::<f64>() / norm;
    if t <= PROB_TOL || t >= 1.0 - PROB_TOL {
        return None;
    }
    let on_line = ra.iter().zip(&d).zip(rp).all(|((x, dv), q)| (x + t * dv - q).abs() <= 1e-12);
    on_line.then(|| vec![1.0 - t, t])
}

fn triangle_weights(a: &Belief, b: &Belief, c: &Belief, p: &Belief) -> Option<Vec<f64>> {
    let (ra, rb, rc, rp) = (a.reduced(), b.reduced(), c.reduced(), p.reduced());
    let (e1, e2) = ([rb[0] - ra[0], rb[1] - ra[1]], [rc[0] - ra[0], rc[1] - ra[1]]);
    let det = e1[0] * e2[1] - e1[1] * e2[0];
    if det.abs() < 1e-14 {
        return None;
    }
    let q = [rp[0] - ra[0], rp[1] - ra[1]];
    let s = (q[0] * e2[1] - q[1] * e2[0]) / det;
    let t = (e1[0] * q[1] - e1[1] * q[0]) / det;
    let w = vec![1.0 - s - t, s, t];
    w.iter().all(|x| *x > PROB_TOL).then_some(w)
}

/// Pair verdicts of the mediator's domination test over a binary grid.
#[derive(Debug, Clone)]
pub struct PairTable {
    rows: Vec<BitVec>,
}

impl PairTable {
    pub fn build(v_m: &UtilityFunction, grid: &BeliefGrid, config: &SolverConfig) -> Result<Self> {
        Ok(Self { rows: crate::domination::domination_graph(v_m, grid, config)? })
    }

    pub fn dominating(&self, i: usize, j: usize) -> bool {
        i == j || self.rows[i][j]
    }
}

/// Constrained concavification at every prior of `prior_grid`.
pub fn sweep_single(
    v_s: &UtilityFunction,
    v_m: &UtilityFunction,
    prior_grid: &BeliefGrid,
    grid: &BeliefGrid,
) -> Result<Vec<(Belief, f64)>> {
    let detailed = sweep_single_detailed(v_s, v_m, prior_grid, grid, &SolverConfig::default())?;
    Ok(prior_grid.points().iter().cloned().zip(detailed.into_iter().map(|r| r.value)).collect())
}

pub fn sweep_single_detailed(
    v_s: &UtilityFunction,
    v_m: &UtilityFunction,
    prior_grid: &BeliefGrid,
    grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<Vec<SingleSolveResult>> {
    if grid.states() != 2 {
        return prior_grid.points().iter().map(|p| solve_single_with(v_s, v_m, p, grid, config)).collect();
    }
    for p in prior_grid.points() {
        check_inputs(v_s, v_m, p, grid)?;
    }
    let table = PairTable::build(v_m, grid, config)?;
    let values = v_s.values_on::<f64>(grid)?;
    prior_grid
        .points()
        .iter()
        .map(|p| solve_binary(v_s, p, grid, &values, config, |i, j| Ok(table.dominating(i, j))))
        .collect()
}

/// Whether no garbling of `mu` onto grid points gains the mediator more
/// than `eps`.
pub fn membership_m_eps(mu: &FiniteBeliefDistribution, v_m: &UtilityFunction, grid: &BeliefGrid, eps: f64) -> Result<bool> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidDistribution(format!("eps must be nonnegative, got {eps}")));
    }
    let (best, _) = best_garbling(mu, v_m, grid)?;
    Ok(best <= expected_utility(v_m, mu)? + eps + crate::config::FEASIBILITY_TOL)
}

/// Largest `E_nu v_m` over `nu ⪯ mu` supported on grid points and the
/// support of `mu`, with a maximizer.
pub fn best_garbling(
    mu: &FiniteBeliefDistribution,
    v_m: &UtilityFunction,
    grid: &BeliefGrid,
) -> Result<(f64, FiniteBeliefDistribution)> {
    if mu.states() != v_m.states() || grid.states() != mu.states() {
        return Err(Error::DimensionMismatch("distribution, grid and utility must share the state count".into()));
    }
    let binary = mu.states() == 2;
    let (lo, hi) = mu.support().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), b| {
        (l.min(b.reduced()[0]), h.max(b.reduced()[0]))
    });
    let mut nodes: Vec<Belief> = grid
        .points()
        .iter()
        .filter(|g| !binary || (g.x() >= lo - PROB_TOL && g.x() <= hi + PROB_TOL))
        .cloned()
        .collect();
    for b in mu.support() {
        if !nodes.iter().any(|g| g.approx_eq(b, PROB_TOL)) {
            nodes.push(b.clone());
        }
    }
    let (m, k) = (nodes.len(), mu.len());
    let dims = mu.states() - 1;
    let var = |j: usize, i: usize| j * k + i;
    let node_values: Vec<f64> = nodes.iter().map(|g| v_m.eval(g)).collect::<Result<_>>()?;
    let mut objective = vec![0.0; m * k];
    for j in 0..m {
        for i in 0..k {
            objective[var(j, i)] = node_values[j];
        }
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, w) in mu.weights().iter().enumerate() {
        let mut row = vec![0.0; m * k];
        for j in 0..m {
            row[var(j, i)] = 1.0;
        }
        rows.push(row);
        rhs.push(*w);
    }
    for j in 0..m {
        for d in 0..dims {
            let mut row = vec![0.0; m * k];
            for (i, y) in mu.support().iter().enumerate() {
                row[var(j, i)] = y.reduced()[d] - nodes[j].reduced()[d];
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }
    let res = solve_lp(&LpProblem::new(objective, rows, rhs))?;
    if res.status != LpStatus::Optimal {
        return Err(Error::LpFailure(format!("garbling LP ended {:?}", res.status)));
    }
    let nu_w: Vec<f64> = (0..m).map(|j| (0..k).map(|i| res.solution[var(j, i)]).sum()).collect();
    let keep: Vec<usize> = (0..m).filter(|&j| nu_w[j] > 1e-12).collect();
    let total: f64 = keep.iter().map(|&j| nu_w[j]).sum();
    let nu = FiniteBeliefDistribution::new(
        keep.iter().map(|&j| nodes[j].clone()).collect(),
        keep.iter().map(|&j| nu_w[j] / total).collect(),
    )?;
    Ok((res.value, nu))
}
