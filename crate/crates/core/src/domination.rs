//! Affine domination of belief collections and sets.
//!
//! A collection is dominating for `u` when every convex combination of its
//! values is at least `u` at the combined belief. For binary beliefs and a
//! pair `q1 < q2` this says the chord lies above `u` on `[q1, q2]`.

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{Belief, BeliefGrid};
use crate::config::{Execution, SolverConfig};
use crate::error::{Error, Result};
use crate::par;
use crate::utility::{lower_convex_envelope, lower_hull_1d, UtilityFunction, ValueAtBelief};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectionViolation {
    /// Convex weights on the queried beliefs, in input order.
    pub weights: Vec<f64>,
    pub mean: Belief,
    /// `u(mean)` minus the weighted value; positive.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetViolation {
    pub mean: Belief,
    pub envelope: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    /// Ascending grid indices.
    pub indices: Vec<usize>,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportFamily {
    pub supports: Vec<Support>,
}

pub fn check_collection(u: &UtilityFunction, beliefs: &[Belief]) -> Result<bool> {
    check_collection_with(u, beliefs, &SolverConfig::default())
}

pub fn check_collection_with(u: &UtilityFunction, beliefs: &[Belief], config: &SolverConfig) -> Result<bool> {
    Ok(collection_violation(u, beliefs, config)?.is_none())
}

/// Worst sampled violation of domination, if any exceeds the tolerance.
pub fn collection_violation(
    u: &UtilityFunction,
    beliefs: &[Belief],
    config: &SolverConfig,
) -> Result<Option<CollectionViolation>> {
    let states = u.states();
    if beliefs.is_empty() {
        return Err(Error::InvalidDistribution("empty collection".into()));
    }
    if beliefs.len() > states {
        return Err(Error::DimensionMismatch(format!(
            "collection of {} beliefs exceeds the {states} states",
            beliefs.len()
        )));
    }
    if beliefs.iter().any(|b| b.states() != states) {
        return Err(Error::DimensionMismatch("beliefs and utility have different state counts".into()));
    }
    if !(config.domination_step > 0.0) {
        return Err(Error::InvalidGrid(format!("sampling step {} must be positive", config.domination_step)));
    }
    if beliefs.len() == 1 || matches!(u, UtilityFunction::Constant { .. }) {
        return Ok(None);
    }
    if states == 2 {
        pair_violation(u, &beliefs[0], &beliefs[1], config)
    } else {
        simplex_violation(u, beliefs, config)
    }
}

fn pair_violation(u: &UtilityFunction, a: &Belief, b: &Belief, config: &SolverConfig) -> Result<Option<CollectionViolation>> {
    let (swap, q1, q2) = if a.x() <= b.x() { (false, a.x(), b.x()) } else { (true, b.x(), a.x()) };
    if q2 - q1 <= 0.0 {
        return Ok(None);
    }
    let (v1, v2) = (u.eval_x(q1)?, u.eval_x(q2)?);
    let slope = (v2 - v1) / (q2 - q1);
    let mut worst: Option<(f64, f64)> = None;
    let mut test = |x: f64| -> Result<()> {
        if x <= q1 || x >= q2 {
            return Ok(());
        }
        let gap = v1 + slope * (x - q1) - u.eval_x(x)?;
        if gap < -config.domination_tol && worst.map_or(true, |(_, g)| gap < g) {
            worst = Some((x, gap));
        }
        Ok(())
    };
    for x in u.breakpoints() {
        test(x)?;
    }
    if let UtilityFunction::Piecewise(pw) = u {
        let step = config.domination_step;
        let mut k = 1usize;
        loop {
            let x = q1 + k as f64 * step;
            if x >= q2 {
                break;
            }
            test(x)?;
            k += 1;
        }
        for piece in pw.pieces() {
            let lo = piece.from.max(q1);
            let hi = piece.to.min(q2);
            if lo >= hi {
                continue;
            }
            if piece.cosine.is_some() {
                let fine = step / 10.0;
                let count = ((hi - lo) / fine).ceil() as usize;
                for k in 0..=count {
                    test(lo + (hi - lo) * k as f64 / count.max(1) as f64)?;
                }
            } else if piece.degree() == 2 {
                let c = &piece.coefficients;
                if c[2] != 0.0 {
                    test(piece.origin + (slope - c[1]) / (2.0 * c[2]))?;
                }
            }
        }
    }
    Ok(worst.map(|(x, gap)| {
        let w1 = (q2 - x) / (q2 - q1);
        let weights = if swap { vec![1.0 - w1, w1] } else { vec![w1, 1.0 - w1] };
        CollectionViolation { weights, mean: Belief::binary(x).expect("inside [q1, q2]"), gap: -gap }
    }))
}

fn simplex_violation(u: &UtilityFunction, beliefs: &[Belief], config: &SolverConfig) -> Result<Option<CollectionViolation>> {
    let m = (1.0 / config.domination_step).round().max(1.0) as u32;
    let values: Vec<f64> = beliefs.iter().map(|b| u.eval(b)).collect::<Result<_>>()?;
    let dims = beliefs[0].states() - 1;
    let mut worst: Option<CollectionViolation> = None;
    let mut counts = vec![0u32; beliefs.len()];
    let mut err = None;
    weight_grid(&mut counts, 0, m, &mut |c| {
        if err.is_some() {
            return;
        }
        let w: Vec<f64> = c.iter().map(|&k| k as f64 / m as f64).collect();
        let mut reduced = vec![0.0; dims];
        for (b, wk) in beliefs.iter().zip(&w) {
            for (r, x) in reduced.iter_mut().zip(b.reduced()) {
                *r += wk * x;
            }
        }
        let mixed: f64 = w.iter().zip(&values).map(|(a, v)| a * v).sum();
        let mean = match Belief::from_reduced(reduced) {
            Ok(b) => b,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        match u.eval(&mean) {
            Ok(v) => {
                let gap = v - mixed;
                if gap > config.domination_tol && worst.as_ref().map_or(true, |w| gap > w.gap) {
                    worst = Some(CollectionViolation { weights: w, mean, gap });
                }
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(worst),
    }
}

fn weight_grid(counts: &mut Vec<u32>, pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        emit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        weight_grid(counts, pos + 1, remaining - c, emit);
    }
}

/// Set-level domination: the lower convex envelope of `u` on `points` is at
/// least `u` at every `mean_grid` point inside their hull.
pub fn check_set(u: &UtilityFunction, points: &[Belief], mean_grid: &BeliefGrid) -> Result<bool> {
    Ok(set_violation(u, points, mean_grid, &SolverConfig::default())?.is_none())
}

pub fn set_violation(
    u: &UtilityFunction,
    points: &[Belief],
    mean_grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<Option<SetViolation>> {
    if points.is_empty() {
        return Err(Error::InvalidDistribution("empty point set".into()));
    }
    if matches!(u, UtilityFunction::Constant { .. }) {
        return Ok(None);
    }
    let values: Vec<f64> = points.iter().map(|b| u.eval(b)).collect::<Result<_>>()?;
    let grid_values = u.values_on::<f64>(mean_grid)?;
    if u.states() == 2 {
        let xs: Vec<f64> = points.iter().map(Belief::x).collect();
        let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        for (g, v) in mean_grid.points().iter().zip(&grid_values) {
            let x = g.x();
            if x < lo || x > hi {
                continue;
            }
            let (env, _) = lower_hull_1d(&xs, &values, x)?;
            if env < v - config.domination_tol {
                return Ok(Some(SetViolation { mean: g.clone(), envelope: env, value: *v }));
            }
        }
    } else {
        let vab: Vec<ValueAtBelief> = points.iter().zip(&values).map(|(b, v)| ValueAtBelief::new(b.clone(), *v)).collect();
        for (g, v) in mean_grid.points().iter().zip(&grid_values) {
            match lower_convex_envelope(&vab, g) {
                Ok(env) if env < v - config.domination_tol => {
                    return Ok(Some(SetViolation { mean: g.clone(), envelope: env, value: *v }))
                }
                Ok(_) | Err(Error::OutsideHull(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

/// All-pairs form of set domination; equivalent to [`check_set`] for two
/// states, where envelope facets are chords.
pub fn check_set_pairwise(u: &UtilityFunction, points: &[Belief], config: &SolverConfig) -> Result<bool> {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if !check_collection_with(u, &[a.clone(), b.clone()], config)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Grid points `q2` such that `{q1, q2}` is dominating, in grid order.
pub fn dominating_partners(u: &UtilityFunction, q1: &Belief, grid: &BeliefGrid) -> Result<Vec<Belief>> {
    dominating_partners_with(u, q1, grid, &SolverConfig::default())
}

pub fn dominating_partners_with(
    u: &UtilityFunction,
    q1: &Belief,
    grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<Vec<Belief>> {
    if u.states() != 2 {
        return Err(Error::Unsupported("dominating partners are computed for two states only".into()));
    }
    let flags = par::map_slice(config.execution, grid.points(), |q2| {
        check_collection_with(u, &[q1.clone(), q2.clone()], config)
    });
    let mut out = Vec::new();
    for (q2, ok) in grid.points().iter().zip(flags) {
        if ok? {
            out.push(q2.clone());
        }
    }
    Ok(out)
}

/// Pairwise domination graph on grid points: `adj[i][j]` iff `{g_i, g_j}`
/// is dominating (`i != j`).
pub fn domination_graph(u: &UtilityFunction, grid: &BeliefGrid, config: &SolverConfig) -> Result<Vec<BitVec>> {
    let n = grid.len();
    let pts = grid.points();
    let rows: Vec<Result<Vec<bool>>> = par::map_range(config.execution, n, |i| {
        (i + 1..n).map(|j| check_collection_with(u, &[pts[i].clone(), pts[j].clone()], config)).collect()
    });
    let mut adj = vec![bitvec![0; n]; n];
    for (i, row) in rows.into_iter().enumerate() {
        for (k, ok) in row?.into_iter().enumerate() {
            if ok {
                let j = i + 1 + k;
                adj[i].set(j, true);
                adj[j].set(i, true);
            }
        }
    }
    Ok(adj)
}

/// Maximal dominating subsets of a binary grid, as maximal cliques of the
/// pairwise graph, each confirmed with [`check_set`] against the grid.
pub fn maximal_dominating_supports(u: &UtilityFunction, grid: &BeliefGrid) -> Result<SupportFamily> {
    maximal_dominating_supports_with(u, grid, &SolverConfig::default())
}

pub fn maximal_dominating_supports_with(
    u: &UtilityFunction,
    grid: &BeliefGrid,
    config: &SolverConfig,
) -> Result<SupportFamily> {
    if u.states() != 2 {
        return Err(Error::Unsupported("maximal supports are enumerated for two states only".into()));
    }
    let adj = domination_graph(u, grid, config)?;
    let cliques = maximal_cliques(&adj, config.clique_cap, config.execution)?;
    let verdicts = par::map_slice(config.execution, &cliques, |c| {
        let pts: Vec<Belief> = c.iter().map(|&i| grid.points()[i].clone()).collect();
        set_violation(u, &pts, grid, config)
    });
    for (c, v) in cliques.iter().zip(verdicts) {
        if let Some(v) = v? {
            return Err(Error::Inconsistent(format!(
                "pairwise-dominating support {c:?} fails the envelope test at {:?}",
                v.mean.reduced()
            )));
        }
    }
    Ok(SupportFamily { supports: cliques.into_iter().map(|indices| Support { indices, maximal: true }).collect() })
}

/// Bron–Kerbosch with pivoting, outer loop in degeneracy order. Cliques are
/// returned sorted.
pub fn maximal_cliques(adj: &[BitVec], cap: usize, execution: Execution) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let order = degeneracy_order(adj);
    let mut position = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let branches: Vec<Result<Vec<Vec<usize>>>> = par::map_slice(execution, &order, |&v| {
        let mut p = bitvec![0; n];
        let mut x = bitvec![0; n];
        for w in adj[v].iter_ones() {
            if position[w] > position[v] {
                p.set(w, true);
            } else {
                x.set(w, true);
            }
        }
        let mut out = Vec::new();
        let mut r = vec![v];
        expand(adj, &mut r, p, x, &mut out, cap)?;
        Ok(out)
    });
    let mut all = Vec::new();
    for b in branches {
        all.extend(b?);
        if all.len() > cap {
            return Err(Error::CliqueCap { cap });
        }
    }
    for c in all.iter_mut() {
        c.sort_unstable();
    }
    all.sort();
    Ok(all)
}

fn expand(adj: &[BitVec], r: &mut Vec<usize>, mut p: BitVec, mut x: BitVec, out: &mut Vec<Vec<usize>>, cap: usize) -> Result<()> {
    if p.not_any() {
        if x.not_any() {
            if out.len() >= cap {
                return Err(Error::CliqueCap { cap });
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    let pivot = p
        .iter_ones()
        .chain(x.iter_ones())
        .max_by_key(|&u| (adj[u].clone() & p.clone()).count_ones())
        .expect("p is nonempty");
    let candidates: Vec<usize> = (p.clone() & !adj[pivot].clone()).iter_ones().collect();
    for v in candidates {
        r.push(v);
        expand(adj, r, p.clone() & adj[v].clone(), x.clone() & adj[v].clone(), out, cap)?;
        r.pop();
        p.set(v, false);
        x.set(v, true);
    }
    Ok(())
}

fn degeneracy_order(adj: &[BitVec]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(|r| r.count_ones()).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for w in adj[v].iter_ones() {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    order
}
