//! Convex order on belief distributions.
//!
//! `nu ⪯ mu` holds when `mu` is a mean-preserving spread of `nu`, i.e. there
//! is a coupling of the two whose conditional mean given the `nu` point is
//! that point.

use crate::belief::{Belief, FiniteBeliefDistribution};
use crate::config::FEASIBILITY_TOL;
use crate::error::{Error, Result};
use crate::lp::check_feasible_with;
use crate::scalar::Scalar;

/// Decides `nu ⪯ mu` through feasibility of the martingale coupling system.
pub fn is_contraction(nu: &FiniteBeliefDistribution, mu: &FiniteBeliefDistribution, tol: f64) -> Result<bool> {
    same_states(nu, mu)?;
    let nu_pts: Vec<Vec<f64>> = nu.support().iter().map(|b| b.reduced().to_vec()).collect();
    let mu_pts: Vec<Vec<f64>> = mu.support().iter().map(|b| b.reduced().to_vec()).collect();
    coupling_feasible(&nu_pts, nu.weights(), &mu_pts, mu.weights(), tol)
}

/// One-dimensional criterion: equal means and pointwise dominance of the
/// call function `t -> E (q - t)+` at every support point.
pub fn is_contraction_1d(nu: &FiniteBeliefDistribution, mu: &FiniteBeliefDistribution) -> Result<bool> {
    is_contraction_1d_with(nu, mu, FEASIBILITY_TOL)
}

pub fn is_contraction_1d_with(nu: &FiniteBeliefDistribution, mu: &FiniteBeliefDistribution, tol: f64) -> Result<bool> {
    same_states(nu, mu)?;
    if nu.states() != 2 {
        return Err(Error::Unsupported(format!(
            "the one-dimensional convex-order test needs 2 states, got {}",
            nu.states()
        )));
    }
    let xs = |d: &FiniteBeliefDistribution| d.support().iter().map(Belief::x).collect::<Vec<_>>();
    let (nu_x, mu_x) = (xs(nu), xs(mu));
    Ok(dominated_1d(&nu_x, nu.weights(), &mu_x, mu.weights(), &tol))
}

fn same_states(nu: &FiniteBeliefDistribution, mu: &FiniteBeliefDistribution) -> Result<()> {
    if nu.states() != mu.states() {
        return Err(Error::DimensionMismatch(format!(
            "distributions over {} and {} states",
            nu.states(),
            mu.states()
        )));
    }
    Ok(())
}

pub(crate) fn dominated_1d<S: Scalar>(nu_x: &[S], nu_w: &[S], mu_x: &[S], mu_w: &[S], tol: &S) -> bool {
    let mean = |x: &[S], w: &[S]| x.iter().zip(w).fold(S::zero(), |a, (x, w)| a + x.clone() * w.clone());
    if (mean(nu_x, nu_w) - mean(mu_x, mu_w)).abs() > *tol {
        return false;
    }
    let at: Vec<S> = nu_x.iter().chain(mu_x).cloned().collect();
    let c_nu = call_profile(nu_x, nu_w, &at);
    let c_mu = call_profile(mu_x, mu_w, &at);
    c_nu.iter().zip(&c_mu).all(|(a, b)| *a <= b.clone() + tol.clone())
}

/// `E (q - t)+` evaluated at each `t` in `at`.
pub(crate) fn call_profile<S: Scalar>(xs: &[S], ws: &[S], at: &[S]) -> Vec<S> {
    at.iter()
        .map(|t| {
            xs.iter().zip(ws).fold(S::zero(), |acc, (x, w)| {
                if *x > *t {
                    acc + w.clone() * (x.clone() - t.clone())
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Feasibility of `pi >= 0` with row sums `nu_w`, column sums `mu_w` and
/// `sum_j pi(i, j) y_j = nu_w[i] x_i` in every reduced coordinate.
pub(crate) fn coupling_feasible<S: Scalar>(
    nu_pts: &[Vec<S>],
    nu_w: &[S],
    mu_pts: &[Vec<S>],
    mu_w: &[S],
    tol: S,
) -> Result<bool> {
    let (m, k) = (nu_pts.len(), mu_pts.len());
    let dims = nu_pts.first().map_or(0, Vec::len);
    let var = |i: usize, j: usize| i * k + j;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..m {
        let mut row = vec![S::zero(); m * k];
        for j in 0..k {
            row[var(i, j)] = S::one();
        }
        rows.push(row);
        rhs.push(nu_w[i].clone());
        for d in 0..dims {
            let mut row = vec![S::zero(); m * k];
            for j in 0..k {
                row[var(i, j)] = mu_pts[j][d].clone() - nu_pts[i][d].clone();
            }
            rows.push(row);
            rhs.push(S::zero());
        }
    }
    for j in 0..k {
        let mut row = vec![S::zero(); m * k];
        for i in 0..m {
            row[var(i, j)] = S::one();
        }
        rows.push(row);
        rhs.push(mu_w[j].clone());
    }
    check_feasible_with(&rows, &rhs, &vec![None; m * k], tol)
}
