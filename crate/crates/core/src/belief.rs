//! Beliefs, finitely supported belief distributions and belief grids.
//!
//! A belief over `k` states is stored by its last `k - 1` coordinates, so a
//! binary belief is the probability of state 1. Ordering of beliefs is
//! lexicographic on those stored coordinates.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on probability sums and belief identity.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Belief {
    reduced: Vec<f64>,
}

impl Belief {
    /// Builds a belief from all `|Ω|` coordinates.
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidBelief(format!("need at least 2 states, got {}", coords.len())));
        }
        if coords.iter().any(|c| !c.is_finite() || *c < -PROB_TOL) {
            return Err(Error::InvalidBelief(format!("{coords:?} has a negative or non-finite coordinate")));
        }
        let total: f64 = coords.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidBelief(format!("{coords:?} sums to {total}")));
        }
        Ok(Self { reduced: coords[1..].iter().map(|c| c.max(0.0)).collect() })
    }

    /// Binary belief given by the probability of state 1.
    pub fn binary(x: f64) -> Result<Self> {
        Self::from_reduced(vec![x])
    }

    pub fn from_reduced(reduced: Vec<f64>) -> Result<Self> {
        if reduced.is_empty() {
            return Err(Error::InvalidBelief("need at least 2 states".into()));
        }
        if reduced.iter().any(|c| !c.is_finite() || *c < -PROB_TOL || *c > 1.0 + PROB_TOL) {
            return Err(Error::OutOfDomain(format!("{reduced:?}")));
        }
        let total: f64 = reduced.iter().sum();
        if total > 1.0 + PROB_TOL {
            return Err(Error::OutOfDomain(format!("{reduced:?} (coordinates sum to {total})")));
        }
        Ok(Self { reduced: reduced.into_iter().map(|c| c.clamp(0.0, 1.0)).collect() })
    }

    /// The belief concentrated on state `k`.
    pub fn vertex(states: usize, k: usize) -> Self {
        let mut reduced = vec![0.0; states - 1];
        if k > 0 {
            reduced[k - 1] = 1.0;
        }
        Self { reduced }
    }

    pub fn states(&self) -> usize {
        self.reduced.len() + 1
    }

    pub fn is_binary(&self) -> bool {
        self.reduced.len() == 1
    }

    /// Probability of state 1; the natural coordinate for binary beliefs.
    pub fn x(&self) -> f64 {
        self.reduced[0]
    }

    pub fn reduced(&self) -> &[f64] {
        &self.reduced
    }

    pub fn coord(&self, k: usize) -> f64 {
        if k == 0 {
            1.0 - self.reduced.iter().sum::<f64>()
        } else {
            self.reduced[k - 1]
        }
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.states()).map(|k| self.coord(k)).collect()
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.reduced.iter().zip(&other.reduced) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.reduced.len().cmp(&other.reduced.len())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.reduced.len() == other.reduced.len()
            && self.reduced.iter().zip(&other.reduced).all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Finitely supported probability measure on beliefs, kept in canonical form:
/// support sorted, duplicate points merged, zero weights dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteBeliefDistribution {
    support: Vec<Belief>,
    weights: Vec<f64>,
}

impl FiniteBeliefDistribution {
    pub fn new(support: Vec<Belief>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let states = support[0].states();
        if support.iter().any(|b| b.states() != states) {
            return Err(Error::DimensionMismatch("support points have different state counts".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite weight in {weights:?}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        let mut pairs: Vec<(Belief, f64)> = support.into_iter().zip(weights).filter(|(_, w)| *w > 0.0).collect();
        pairs.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut merged: Vec<(Belief, f64)> = Vec::with_capacity(pairs.len());
        for (b, w) in pairs {
            match merged.last_mut() {
                Some((last, lw)) if last.approx_eq(&b, PROB_TOL) => *lw += w,
                _ => merged.push((b, w)),
            }
        }
        let (support, weights) = merged.into_iter().unzip();
        Ok(Self { support, weights })
    }

    pub fn point_mass(belief: Belief) -> Self {
        Self { support: vec![belief], weights: vec![1.0] }
    }

    /// Binary distribution from `(x, weight)` pairs.
    pub fn binary(pairs: &[(f64, f64)]) -> Result<Self> {
        let support = pairs.iter().map(|&(x, _)| Belief::binary(x)).collect::<Result<Vec<_>>>()?;
        Self::new(support, pairs.iter().map(|&(_, w)| w).collect())
    }

    pub fn support(&self) -> &[Belief] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> usize {
        self.support[0].states()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Belief, f64)> {
        self.support.iter().zip(self.weights.iter().copied())
    }

    /// Weight placed on `belief` (within [`PROB_TOL`]).
    pub fn mass_at(&self, belief: &Belief) -> f64 {
        self.iter().filter(|(b, _)| b.approx_eq(belief, PROB_TOL)).map(|(_, w)| w).sum()
    }

    /// Lexicographic comparison of `(point, weight)` sequences.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        for ((a, wa), (b, wb)) in self.iter().zip(other.iter()) {
            match a.canonical_cmp(b).then(wa.total_cmp(&wb)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }
}

pub fn mean(dist: &FiniteBeliefDistribution) -> Belief {
    let dims = dist.states() - 1;
    let mut reduced = vec![0.0; dims];
    for (b, w) in dist.iter() {
        for (acc, c) in reduced.iter_mut().zip(b.reduced()) {
            *acc += w * c;
        }
    }
    Belief { reduced: reduced.into_iter().map(|c| c.clamp(0.0, 1.0)).collect() }
}

/// The common prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub belief: Belief,
}

impl Prior {
    pub fn new(coords: &[f64]) -> Result<Self> {
        Ok(Self { belief: Belief::new(coords)? })
    }

    pub fn binary(p: f64) -> Result<Self> {
        Ok(Self { belief: Belief::binary(p)? })
    }

    pub fn states(&self) -> usize {
        self.belief.states()
    }
}

impl From<Belief> for Prior {
    fn from(belief: Belief) -> Self {
        Self { belief }
    }
}

/// Distribution of beliefs when the state is revealed: mass `p_k` on vertex `k`.
pub fn full_information_distribution(prior: &Prior) -> FiniteBeliefDistribution {
    let states = prior.states();
    let support = (0..states).map(|k| Belief::vertex(states, k)).collect();
    let weights = prior.belief.coordinates();
    FiniteBeliefDistribution::new(support, weights).expect("prior coordinates form a distribution")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GridKind {
    Explicit,
    /// Binary grid `0, step, 2 step, ..., 1`.
    Uniform { step: f64 },
    /// All beliefs with coordinates in multiples of `1 / resolution`.
    Simplex { resolution: u32 },
}

/// Sorted, duplicate-free list of beliefs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefGrid {
    points: Vec<Belief>,
    kind: GridKind,
}

impl BeliefGrid {
    pub fn uniform(step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidGrid(format!("step {step} must lie in (0, 1]")));
        }
        let inverse = 1.0 / step;
        let points = if (inverse - inverse.round()).abs() < 1e-9 {
            let n = inverse.round() as u32;
            (0..=n).map(|k| Belief { reduced: vec![k as f64 / n as f64] }).collect()
        } else {
            let mut pts: Vec<Belief> = (0..)
                .map(|k| k as f64 * step)
                .take_while(|x| *x < 1.0 - PROB_TOL)
                .map(|x| Belief { reduced: vec![x] })
                .collect();
            pts.push(Belief { reduced: vec![1.0] });
            pts
        };
        Ok(Self { points, kind: GridKind::Uniform { step } })
    }

    /// Binary grid from explicit probabilities of state 1.
    pub fn binary(points: &[f64]) -> Result<Self> {
        let beliefs = points.iter().map(|&x| Belief::binary(x)).collect::<Result<Vec<_>>>()?;
        Self::explicit(beliefs)
    }

    pub fn explicit(points: Vec<Belief>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        let states = points[0].states();
        if points.iter().any(|b| b.states() != states) {
            return Err(Error::InvalidGrid("grid points have different state counts".into()));
        }
        let mut points = points;
        points.sort_by(|a, b| a.canonical_cmp(b));
        if points.windows(2).any(|w| w[0].approx_eq(&w[1], PROB_TOL)) {
            return Err(Error::InvalidGrid("grid points must be distinct".into()));
        }
        Ok(Self { points, kind: GridKind::Explicit })
    }

    pub fn simplex(states: usize, resolution: u32) -> Result<Self> {
        if states < 2 || resolution == 0 {
            return Err(Error::InvalidGrid(format!("simplex mesh needs states >= 2 and resolution >= 1")));
        }
        let mut points = Vec::new();
        let mut counts = vec![0u32; states - 1];
        compositions(&mut counts, 0, resolution, &mut |c| {
            points.push(Belief { reduced: c.iter().map(|&k| k as f64 / resolution as f64).collect() });
        });
        points.sort_by(|a, b| a.canonical_cmp(b));
        Ok(Self { points, kind: GridKind::Simplex { resolution } })
    }

    pub fn points(&self) -> &[Belief] {
        &self.points
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn states(&self) -> usize {
        self.points[0].states()
    }

    /// Binary coordinates; only meaningful for two states.
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(Belief::x).collect()
    }

    pub fn index_of(&self, belief: &Belief) -> Option<usize> {
        self.points.iter().position(|b| b.approx_eq(belief, PROB_TOL))
    }

    pub fn contains(&self, belief: &Belief) -> bool {
        self.index_of(belief).is_some()
    }

    pub fn contains_vertices(&self) -> bool {
        let k = self.states();
        (0..k).all(|v| self.contains(&Belief::vertex(k, v)))
    }

    /// This grid plus `extra` points (ignoring ones already present).
    pub fn with_points(&self, extra: &[Belief]) -> Result<Self> {
        let missing: Vec<Belief> = extra.iter().filter(|b| !self.contains(b)).cloned().collect();
        if missing.is_empty() {
            return Ok(self.clone());
        }
        let mut all = self.points.clone();
        for b in missing {
            if !all.iter().any(|a| a.approx_eq(&b, PROB_TOL)) {
                all.push(b);
            }
        }
        Self::explicit(all)
    }

    /// Grid extended by the prior and every simplex vertex.
    pub fn with_prior_and_vertices(&self, prior: &Prior) -> Result<Self> {
        let k = self.states();
        let mut extra: Vec<Belief> = (0..k).map(|v| Belief::vertex(k, v)).collect();
        extra.push(prior.belief.clone());
        self.with_points(&extra)
    }
}

fn compositions(counts: &mut Vec<u32>, pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos == counts.len() {
        emit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        compositions(counts, pos + 1, remaining - c, emit);
    }
    counts[pos] = 0;
}
