//! Sender-optimal persuasion through a chain of mediators.
//!
//! The crate works at the level of indirect utilities and belief
//! distributions. With one mediator the sender's value is a constrained
//! concavification over affine-dominating posterior tuples
//! ([`single::solve_single`]). With any number of mediators the value is a
//! maximum over a recursively pruned family of belief distributions, which
//! is computed on a finite lattice of rational-weight distributions
//! ([`chain::solve_chain`]). A direct backward-induction solver over the same
//! lattice ([`poset::verify_backward_induction`]) serves as an independent
//! check.

pub mod belief;
pub mod chain;
pub mod config;
pub mod domination;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod order;
pub mod par;
pub mod poset;
pub mod scalar;
pub mod single;
pub mod utility;

pub use belief::{full_information_distribution, mean, Belief, BeliefGrid, FiniteBeliefDistribution, Prior};
pub use chain::{compute_feasible_sets, solve_chain, ChainProblem, ChainSolveResult, FeasibleSets};
pub use config::{Execution, SolverConfig, FEASIBILITY_TOL};
pub use domination::{check_collection, check_set, dominating_partners, maximal_dominating_supports};
pub use error::{Error, Result};
pub use lattice::{enumerate_lattice, DistributionLattice};
pub use lp::{check_feasible, solve_lp, LpProblem, LpResult, LpStatus};
pub use order::{is_contraction, is_contraction_1d};
pub use poset::{poset_game_value, verify_backward_induction, PosetGame};
pub use scalar::{Rational, Scalar};
pub use single::{membership_m_eps, solve_single, sweep_single, SingleSolveResult};
pub use utility::{concavify_unconstrained, expected_utility, lower_convex_envelope, UtilityFunction, ValueAtBelief};
