//! Numerical constants and limits shared by every solver.

use serde::{Deserialize, Serialize};

/// Absolute feasibility tolerance used by the LP kernel and all float-mode
/// comparisons downstream of it.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// How data-parallel loops are executed.
///
/// `Parallel` uses the rayon pool when the crate is built with the
/// `parallel` feature and silently runs sequentially otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub feasibility_tol: f64,
    /// Sampling step for chord-versus-function comparisons.
    pub domination_step: f64,
    /// Slack below zero that still counts as dominating.
    pub domination_tol: f64,
    pub lattice_cap: usize,
    pub clique_cap: usize,
    pub verifier_cap: usize,
    pub lp_max_iterations: usize,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            feasibility_tol: FEASIBILITY_TOL,
            domination_step: 1e-3,
            domination_tol: 1e-9,
            lattice_cap: 200_000,
            clique_cap: 10_000,
            verifier_cap: 5_000,
            lp_max_iterations: 50_000,
            execution: Execution::Parallel,
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        Self { execution: Execution::Sequential, ..Self::default() }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}
