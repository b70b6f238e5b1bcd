//! Dense two-phase simplex over any [`Scalar`].
//!
//! Problems are `maximize c·x subject to A x = b, lower <= x <= upper`. Pivoting
//! follows Bland's rule (lowest-index entering column, lowest-index basic
//! variable on ratio ties), which cannot cycle and makes every run on the same
//! input follow the same pivot sequence.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<S = f64> {
    /// Coefficients of the maximized objective.
    pub objective: Vec<S>,
    pub eq_matrix: Vec<Vec<S>>,
    pub eq_rhs: Vec<S>,
    pub lower: Vec<S>,
    pub upper: Vec<Option<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult<S = f64> {
    pub status: LpStatus,
    /// Objective at `solution`; zero unless `status` is `Optimal`.
    pub value: S,
    /// Empty unless `status` is `Optimal`.
    pub solution: Vec<S>,
}

impl<S: Scalar> LpProblem<S> {
    /// Nonnegative variables without upper bounds.
    pub fn new(objective: Vec<S>, eq_matrix: Vec<Vec<S>>, eq_rhs: Vec<S>) -> Self {
        let n = objective.len();
        Self { objective, eq_matrix, eq_rhs, lower: vec![S::zero(); n], upper: vec![None; n] }
    }

    pub fn with_bounds(mut self, lower: Vec<S>, upper: Vec<Option<S>>) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint rows but {} right-hand sides",
                self.eq_matrix.len(),
                self.eq_rhs.len()
            )));
        }
        if let Some((i, row)) = self.eq_matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row {i} has {} columns, expected {n}", row.len())));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "bounds have lengths {}/{}, expected {n}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        Ok(())
    }
}

pub fn solve_lp<S: Scalar>(problem: &LpProblem<S>) -> Result<LpResult<S>> {
    solve_lp_with(problem, S::tolerance(), DEFAULT_MAX_ITERATIONS)
}

pub fn solve_lp_with<S: Scalar>(problem: &LpProblem<S>, tol: S, max_iterations: usize) -> Result<LpResult<S>> {
    problem.validate()?;
    let standard = StandardForm::build(problem);
    let mut iterations = 0;
    let mut tableau = match phase_one(&standard, &tol, max_iterations, &mut iterations)? {
        Some(t) => t,
        None => return Ok(LpResult { status: LpStatus::Infeasible, value: S::zero(), solution: Vec::new() }),
    };
    tableau.install_objective(&standard.objective);
    let outcome = tableau.run(&tol, max_iterations, &mut iterations)?;
    if outcome == Outcome::Unbounded {
        return Ok(LpResult { status: LpStatus::Unbounded, value: S::zero(), solution: Vec::new() });
    }
    let shifted = tableau.primal(standard.n);
    let solution: Vec<S> = (0..problem.num_vars())
        .map(|j| problem.lower[j].clone() + shifted[j].clone())
        .collect();
    let value = dot(&problem.objective, &solution);
    Ok(LpResult { status: LpStatus::Optimal, value, solution })
}

/// True iff `A x = b` has a solution with `0 <= x <= upper` within tolerance.
pub fn check_feasible<S: Scalar>(eq_matrix: &[Vec<S>], eq_rhs: &[S], upper: &[Option<S>]) -> Result<bool> {
    check_feasible_with(eq_matrix, eq_rhs, upper, S::tolerance())
}

pub fn check_feasible_with<S: Scalar>(eq_matrix: &[Vec<S>], eq_rhs: &[S], upper: &[Option<S>], tol: S) -> Result<bool> {
    let n = upper.len();
    let problem = LpProblem::new(vec![S::zero(); n], eq_matrix.to_vec(), eq_rhs.to_vec())
        .with_bounds(vec![S::zero(); n], upper.to_vec());
    problem.validate()?;
    let standard = StandardForm::build(&problem);
    let mut iterations = 0;
    Ok(phase_one(&standard, &tol, DEFAULT_MAX_ITERATIONS, &mut iterations)?.is_some())
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `maximize c·y, A y = b, y >= 0` with `b >= 0`, after shifting lower bounds
/// away and turning upper bounds into slack rows.
struct StandardForm<S> {
    /// Number of original (shifted) variables; slack columns follow them.
    n: usize,
    objective: Vec<S>,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
}

impl<S: Scalar> StandardForm<S> {
    fn build(problem: &LpProblem<S>) -> Self {
        let n = problem.num_vars();
        let bounded: Vec<usize> = (0..n).filter(|&j| problem.upper[j].is_some()).collect();
        let width = n + bounded.len();
        let mut rows = Vec::with_capacity(problem.eq_matrix.len() + bounded.len());
        let mut rhs = Vec::with_capacity(rows.capacity());
        for (row, b) in problem.eq_matrix.iter().zip(&problem.eq_rhs) {
            let shift = dot(row, &problem.lower);
            let mut full = row.clone();
            full.resize(width, S::zero());
            rows.push(full);
            rhs.push(b.clone() - shift);
        }
        for (k, &j) in bounded.iter().enumerate() {
            let mut full = vec![S::zero(); width];
            full[j] = S::one();
            full[n + k] = S::one();
            rows.push(full);
            let upper = problem.upper[j].clone().expect("bounded column");
            rhs.push(upper - problem.lower[j].clone());
        }
        for (row, b) in rows.iter_mut().zip(rhs.iter_mut()) {
            if *b < S::zero() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                *b = -b.clone();
            }
        }
        let mut objective = problem.objective.clone();
        objective.resize(width, S::zero());
        Self { n, objective, rows, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau<S> {
    /// Each row holds the column entries followed by the right-hand side.
    rows: Vec<Vec<S>>,
    /// Reduced costs `c_j - c_B B^-1 A_j`, then minus the objective value.
    cost: Vec<S>,
    basis: Vec<usize>,
    columns: usize,
}

fn phase_one<S: Scalar>(
    standard: &StandardForm<S>,
    tol: &S,
    max_iterations: usize,
    iterations: &mut usize,
) -> Result<Option<Tableau<S>>> {
    let m = standard.rows.len();
    let width = standard.objective.len();
    let columns = width + m;
    let rows: Vec<Vec<S>> = standard
        .rows
        .iter()
        .zip(&standard.rhs)
        .enumerate()
        .map(|(i, (row, b))| {
            let mut full = row.clone();
            full.resize(columns, S::zero());
            full[width + i] = S::one();
            full.push(b.clone());
            full
        })
        .collect();
    let mut tableau = Tableau { rows, cost: Vec::new(), basis: (width..width + m).collect(), columns };
    let mut phase_cost = vec![S::zero(); columns];
    for c in phase_cost.iter_mut().skip(width) {
        *c = -S::one();
    }
    tableau.install_objective(&phase_cost);
    tableau.run(tol, max_iterations, iterations)?;
    let value = -tableau.cost[columns].clone();
    if value < -tol.clone() {
        return Ok(None);
    }
    tableau.drive_out_artificials(width, tol);
    tableau.drop_columns_from(width);
    Ok(Some(tableau))
}

impl<S: Scalar> Tableau<S> {
    fn install_objective(&mut self, objective: &[S]) {
        let mut cost: Vec<S> = objective.to_vec();
        cost.resize(self.columns, S::zero());
        cost.push(S::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = objective.get(b).cloned().unwrap_or_else(S::zero);
            if cb == S::zero() {
                continue;
            }
            for (c, v) in cost.iter_mut().zip(row) {
                *c = c.clone() - cb.clone() * v.clone();
            }
        }
        self.cost = cost;
    }

    fn run(&mut self, tol: &S, max_iterations: usize, iterations: &mut usize) -> Result<Outcome> {
        loop {
            let Some(enter) = (0..self.columns).find(|&j| self.cost[j] > *tol) else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter] > *tol {
                    let ratio = row[self.columns].clone() / row[enter].clone();
                    let better = match &leave {
                        None => true,
                        Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((leave, _)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            *iterations += 1;
            if *iterations > max_iterations {
                return Err(Error::IterationLimit { iterations: *iterations - 1 });
            }
            self.pivot(leave, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            if factor == S::zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * p.clone();
            }
        }
        let factor = self.cost[c].clone();
        if factor != S::zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * p.clone();
            }
        }
        self.basis[r] = c;
    }

    /// Pivots basic artificial variables out; rows where that is impossible
    /// are linearly dependent and get removed.
    fn drive_out_artificials(&mut self, first_artificial: usize, tol: &S) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| self.rows[r][j].abs() > *tol) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    fn drop_columns_from(&mut self, first: usize) {
        for row in self.rows.iter_mut() {
            let rhs = row[self.columns].clone();
            row.truncate(first);
            row.push(rhs);
        }
        self.columns = first;
        self.cost.clear();
    }

    fn primal(&self, n: usize) -> Vec<S> {
        let mut x = vec![S::zero(); self.columns];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let v = row[self.columns].clone();
            x[b] = if v < S::zero() { S::zero() } else { v };
        }
        x.truncate(n);
        x
    }
}
