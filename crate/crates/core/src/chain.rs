//! Persuasion through a chain of mediators on a finite distribution lattice.
//!
//! `M_{n+1}` is the whole lattice. Going down, `M_i` keeps the elements of
//! `M_{i+1}` from which mediator `i` gains at most `eps` by moving to any
//! less informative element of `M_{i+1}`. The sender's value is the best
//! expected utility over `M_1`.

use std::collections::HashMap;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{Belief, BeliefGrid, FiniteBeliefDistribution, Prior};
use crate::config::{Execution, SolverConfig};
use crate::domination::set_violation;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_lattice_with, DistributionLattice, LatticeDiagnostics, LatticeOptions};
use crate::par;
use crate::poset::{margin, within, PosetGame};
use crate::scalar::{Rational, Scalar};
use crate::utility::{concavify_with_distribution, UtilityFunction};

#[derive(Debug, Clone)]
pub struct ChainProblem {
    pub sender: UtilityFunction,
    /// `v_{M_1}, ..., v_{M_n}`; mediator 1 hears the sender first.
    pub mediators: Vec<UtilityFunction>,
    pub prior: Prior,
    pub grid: BeliefGrid,
    pub denominator: u32,
    pub eps: f64,
}

/// Why an element was dropped at some level: the best deviation below it
/// and what it gains the mediator.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S = f64> {
    pub deviation: usize,
    pub gain: S,
}

#[derive(Debug, Clone)]
pub struct FeasibleSets<S = f64> {
    /// `masks[i - 1]` is `M_i`, for `i = 1..=n + 1`.
    masks: Vec<BitVec>,
    /// `witnesses[i - 1][mu]` is set when `mu` is in `M_{i+1}` but not `M_i`.
    witnesses: Vec<Vec<Option<Witness<S>>>>,
}

impl<S: Scalar> FeasibleSets<S> {
    /// `M_i` for `1 <= i <= n + 1`.
    pub fn level(&self, i: usize) -> &BitSlice {
        &self.masks[i - 1]
    }

    pub fn levels(&self) -> usize {
        self.masks.len()
    }

    pub fn contains(&self, i: usize, mu: usize) -> bool {
        self.masks[i - 1][mu]
    }

    pub fn witness(&self, i: usize, mu: usize) -> Option<&Witness<S>> {
        self.witnesses.get(i - 1).and_then(|w| w[mu].as_ref())
    }

    /// `|M_1|, ..., |M_{n+1}|`.
    pub fn sizes(&self) -> Vec<usize> {
        self.masks.iter().map(|m| m.count_ones()).collect()
    }

    pub fn is_nested(&self) -> bool {
        self.masks.windows(2).all(|w| (w[0].clone() & !w[1].clone()).not_any())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSolveResult {
    pub value: f64,
    /// Rendered exact value in rational mode.
    pub exact_value: Option<String>,
    pub optimal_distribution: FiniteBeliefDistribution,
    /// Exact weights of the optimal distribution in rational mode.
    pub exact_weights: Option<Vec<String>>,
    /// `|M_1|, ..., |M_{n+1}|`; empty without mediators.
    pub feasible_set_sizes: Vec<usize>,
    pub lattice: Option<LatticeDiagnostics>,
    pub mediators: usize,
    pub eps: f64,
}

/// Everything computed by a lattice solve.
#[derive(Debug, Clone)]
pub struct ChainSolution<S = f64> {
    pub result: ChainSolveResult,
    pub lattice: DistributionLattice<S>,
    pub feasible: FeasibleSets<S>,
    pub optimal_index: usize,
    /// Expected sender utility per element.
    pub sender_values: Vec<S>,
    /// `mediator_values[i][mu]` is mediator `i + 1`'s expected utility.
    pub mediator_values: Vec<Vec<S>>,
    pub eps: S,
}

impl<S: Scalar> ChainSolution<S> {
    /// The same instance as a poset game started at full information.
    pub fn poset_game(&self) -> Result<PosetGame<S>> {
        let start = self
            .lattice
            .full_information()
            .ok_or_else(|| Error::Inconsistent("full-information element missing".into()))?;
        let mut utilities = vec![self.sender_values.clone()];
        utilities.extend(self.mediator_values.iter().cloned());
        PosetGame::new(self.lattice.order_rows().to_vec(), utilities, start)
    }
}

/// Membership masks over a lattice for the given mediators (float mode).
pub fn compute_feasible_sets(lattice: &DistributionLattice, mediators: &[UtilityFunction], eps: f64) -> Result<FeasibleSets> {
    let values = mediator_values(lattice, mediators)?;
    Ok(feasible_from_values(lattice, &values, &eps, Execution::default()))
}

/// Expected utility of each mediator at each lattice element.
pub fn mediator_values<S: Scalar>(lattice: &DistributionLattice<S>, mediators: &[UtilityFunction]) -> Result<Vec<Vec<S>>> {
    mediators.iter().map(|u| element_values(lattice, u)).collect()
}

fn element_values<S: Scalar>(lattice: &DistributionLattice<S>, u: &UtilityFunction) -> Result<Vec<S>> {
    let at_points: Vec<S> = lattice
        .scalar_points()
        .iter()
        .map(|p| u.eval_reduced(p))
        .collect::<Result<_>>()?;
    Ok(lattice.elements().iter().map(|e| e.expectation(&at_points)).collect())
}

pub fn feasible_from_values<S: Scalar>(
    lattice: &DistributionLattice<S>,
    values: &[Vec<S>],
    eps: &S,
    execution: Execution,
) -> FeasibleSets<S> {
    let n_el = lattice.len();
    let n = values.len();
    let m = margin(eps);
    let mut masks = vec![bitvec![1; n_el]; n + 1];
    let mut witnesses = vec![Vec::new(); n];
    for i in (1..=n).rev() {
        let above = masks[i].clone();
        let w = &values[i - 1];
        let verdicts: Vec<Option<Option<Witness<S>>>> = par::map_range(execution, n_el, |mu| {
            if !above[mu] {
                return None;
            }
            let mut best = (w[mu].clone(), mu);
            for nu in lattice.down_set(mu).iter_ones() {
                if above[nu] && (w[nu] > best.0 || (w[nu] == best.0 && nu < best.1 && best.1 != mu)) {
                    best = (w[nu].clone(), nu);
                }
            }
            if within(&w[mu], &best.0, &m) {
                Some(None)
            } else {
                Some(Some(Witness { deviation: best.1, gain: best.0 - w[mu].clone() }))
            }
        });
        let mut mask = bitvec![0; n_el];
        let mut wit = Vec::with_capacity(n_el);
        for (mu, v) in verdicts.into_iter().enumerate() {
            match v {
                Some(None) => {
                    mask.set(mu, true);
                    wit.push(None);
                }
                Some(Some(x)) => wit.push(Some(x)),
                None => wit.push(None),
            }
        }
        masks[i - 1] = mask;
        witnesses[i - 1] = wit;
    }
    FeasibleSets { masks, witnesses }
}

pub fn solve_chain(problem: &ChainProblem) -> Result<ChainSolveResult> {
    solve_chain_with(problem, &SolverConfig::default())
}

pub fn solve_chain_with(problem: &ChainProblem, config: &SolverConfig) -> Result<ChainSolveResult> {
    validate(problem)?;
    if problem.mediators.is_empty() {
        return direct(problem);
    }
    Ok(solve_chain_detailed::<f64>(problem, config)?.result)
}

/// Rational-arithmetic solve; the value and weights are also rendered exactly.
pub fn solve_chain_exact(problem: &ChainProblem, config: &SolverConfig) -> Result<ChainSolveResult> {
    validate(problem)?;
    if problem.mediators.is_empty() {
        return direct(problem);
    }
    Ok(solve_chain_detailed::<Rational>(problem, config)?.result)
}

fn direct(problem: &ChainProblem) -> Result<ChainSolveResult> {
    let (value, dist) = concavify_with_distribution(&problem.sender, &problem.grid, &problem.prior.belief)?;
    Ok(ChainSolveResult {
        value,
        exact_value: None,
        optimal_distribution: dist,
        exact_weights: None,
        feasible_set_sizes: Vec::new(),
        lattice: None,
        mediators: 0,
        eps: problem.eps,
    })
}

pub fn validate(problem: &ChainProblem) -> Result<()> {
    if !(problem.eps >= 0.0 && problem.eps.is_finite()) {
        return Err(Error::InvalidDistribution(format!("eps must be finite and nonnegative, got {}", problem.eps)));
    }
    let k = problem.prior.states();
    if problem.grid.states() != k || problem.sender.states() != k || problem.mediators.iter().any(|u| u.states() != k) {
        return Err(Error::DimensionMismatch("prior, grid and utilities must share the state count".into()));
    }
    if k >= 3 && problem.mediators.len() >= 2 {
        return Err(Error::Unsupported(format!(
            "chains of {} mediators are solved for two states only",
            problem.mediators.len()
        )));
    }
    if problem.eps == 0.0 {
        if let Some(i) = problem.mediators.iter().position(|u| !u.is_continuous()) {
            return Err(Error::DiscontinuousAtZeroEps(i + 1));
        }
    }
    Ok(())
}

/// Grid the lattice is built on: the problem grid plus the simplex vertices.
pub fn lattice_grid(problem: &ChainProblem) -> Result<BeliefGrid> {
    let k = problem.prior.states();
    let vertices: Vec<Belief> = (0..k).map(|v| Belief::vertex(k, v)).collect();
    problem.grid.with_points(&vertices)
}

pub fn solve_chain_detailed<S: Scalar>(problem: &ChainProblem, config: &SolverConfig) -> Result<ChainSolution<S>> {
    validate(problem)?;
    let grid = lattice_grid(problem)?;
    check_prior(problem)?;
    let options = LatticeOptions { include_full_information: true, ..LatticeOptions::from_config(config) };
    let lattice = enumerate_lattice_with::<S>(&grid, problem.denominator, &problem.prior, &options)?;
    let sender_values = element_values(&lattice, &problem.sender)?;
    let mediator_values = mediator_values(&lattice, &problem.mediators)?;
    let eps = S::from_f64(problem.eps);
    let feasible = feasible_from_values(&lattice, &mediator_values, &eps, config.execution);
    let top = lattice
        .full_information()
        .ok_or_else(|| Error::Inconsistent("full-information element missing".into()))?;
    let m1 = feasible.level(1);
    let mut best: Option<usize> = None;
    for mu in lattice.down_set(top).iter_ones() {
        if m1[mu] && best.map_or(true, |b| sender_values[mu] > sender_values[b]) {
            best = Some(mu);
        }
    }
    let optimal_index = best.ok_or_else(|| Error::Inconsistent("no feasible element below full information".into()))?;
    let value = sender_values[optimal_index].clone();
    let exact = S::EXACT;
    let element = lattice.element(optimal_index);
    let result = ChainSolveResult {
        value: value.to_f64(),
        exact_value: exact.then(|| value.render()),
        optimal_distribution: lattice.distribution(optimal_index),
        exact_weights: exact.then(|| element.weights.iter().map(Scalar::render).collect()),
        feasible_set_sizes: feasible.sizes(),
        lattice: Some(lattice.diagnostics()),
        mediators: problem.mediators.len(),
        eps: problem.eps,
    };
    Ok(ChainSolution { result, lattice, feasible, optimal_index, sender_values, mediator_values, eps })
}

/// The prior has to be a lattice grid point so that its point mass is an
/// element.
pub fn check_prior(problem: &ChainProblem) -> Result<()> {
    let grid = lattice_grid(problem)?;
    if grid.contains(&problem.prior.belief) {
        Ok(())
    } else {
        Err(prior_off_grid(&grid, &problem.prior, problem.denominator))
    }
}

fn prior_off_grid(grid: &BeliefGrid, prior: &Prior, denominator: u32) -> Error {
    let coords = prior.belief.coordinates();
    let k = coords.len();
    let coordinate = (1..k)
        .chain(std::iter::once(0))
        .find(|&c| !grid.points().iter().any(|g| (g.coord(c) - coords[c]).abs() <= 1e-12))
        .unwrap_or(1);
    Error::PriorNotRepresentable { coordinate, value: coords[coordinate], denominator }
}

/// Best sender value over lattice elements whose support is set-dominating
/// for every mediator, tested at the lattice grid points.
pub fn naive_domination_bound<S: Scalar>(
    problem: &ChainProblem,
    solution: &ChainSolution<S>,
    config: &SolverConfig,
) -> Result<f64> {
    let lattice = &solution.lattice;
    let grid = lattice.grid();
    let mut verdicts: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut best = f64::NEG_INFINITY;
    for (idx, e) in lattice.elements().iter().enumerate() {
        let ok = match verdicts.get(&e.support) {
            Some(ok) => *ok,
            None => {
                let pts: Vec<Belief> = e.support.iter().map(|&i| grid.points()[i].clone()).collect();
                let mut ok = true;
                for u in &problem.mediators {
                    if set_violation(u, &pts, grid, config)?.is_some() {
                        ok = false;
                        break;
                    }
                }
                verdicts.insert(e.support.clone(), ok);
                ok
            }
        };
        if ok {
            best = best.max(solution.sender_values[idx].to_f64());
        }
    }
    Ok(best)
}
