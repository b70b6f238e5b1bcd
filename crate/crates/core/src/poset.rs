//! Finite poset games: agents `1..=n` in turn may move a token down a partial
//! order, agent 0 first picks the start below `x_0`, and payoffs depend on the
//! final position.

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::audit_partial_order;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct PosetGame<S = f64> {
    /// `down[x][y]` iff `y ⪯ x`.
    pub down: Vec<BitVec>,
    /// `utilities[i][x]` is agent `i`'s payoff at `x`; agent 0 is the sender.
    pub utilities: Vec<Vec<S>>,
    pub start: usize,
}

impl<S: Scalar> PosetGame<S> {
    pub fn new(down: Vec<BitVec>, utilities: Vec<Vec<S>>, start: usize) -> Result<Self> {
        let game = Self { down, utilities, start };
        game.validate()?;
        Ok(game)
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    /// Number of moving agents after agent 0.
    pub fn agents(&self) -> usize {
        self.utilities.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::OrderViolation("empty game".into()));
        }
        if self.start >= n {
            return Err(Error::DimensionMismatch(format!("start {} outside {n} elements", self.start)));
        }
        if self.utilities.is_empty() {
            return Err(Error::DimensionMismatch("agent 0 needs a utility".into()));
        }
        if let Some(i) = self.utilities.iter().position(|u| u.len() != n) {
            return Err(Error::DimensionMismatch(format!("utility {i} has wrong length")));
        }
        audit_partial_order(&self.down)
    }
}

/// `w >= best - margin` with the margin `eps` plus the scalar tolerance; both
/// solvers use this exact expression.
pub(crate) fn within<S: Scalar>(w: &S, best: &S, margin: &S) -> bool {
    *w >= best.clone() - margin.clone()
}

pub(crate) fn margin<S: Scalar>(eps: &S) -> S {
    eps.clone() + S::tolerance()
}

/// Surviving sets `X_n, ..., X_1` (index `i - 1` holds `X_i`) and the sender's
/// best element of `X_1` below the start.
pub fn poset_game_value<S: Scalar>(game: &PosetGame<S>, eps: &S) -> Result<(S, usize)> {
    game.validate()?;
    let sets = surviving_sets(game, eps);
    Ok(best_below(game, &sets[0]))
}

pub fn surviving_sets<S: Scalar>(game: &PosetGame<S>, eps: &S) -> Vec<BitVec> {
    let n = game.len();
    let agents = game.agents();
    let m = margin(eps);
    let mut sets = vec![bitvec![1; n]; agents + 1];
    for i in (1..=agents).rev() {
        let above = sets[i].clone();
        let w = &game.utilities[i];
        let mut next = bitvec![0; n];
        for x in above.iter_ones() {
            let best = (game.down[x].clone() & above.clone())
                .iter_ones()
                .map(|y| w[y].clone())
                .fold(w[x].clone(), S::max_of);
            if within(&w[x], &best, &m) {
                next.set(x, true);
            }
        }
        sets[i - 1] = next;
    }
    sets
}

fn best_below<S: Scalar>(game: &PosetGame<S>, allowed: &BitSlice) -> (S, usize) {
    let w0 = &game.utilities[0];
    let mut best: Option<(S, usize)> = None;
    for x in game.down[game.start].iter_ones() {
        if !allowed[x] {
            continue;
        }
        if best.as_ref().map_or(true, |(v, _)| w0[x] > *v) {
            best = Some((w0[x].clone(), x));
        }
    }
    best.expect("minimal elements below the start always survive")
}

/// Backward induction on the explicit move tree. Returns agent 0's value and
/// the outcome reached.
///
/// Agent `i` at `x` may move to any `x' ⪯ x`; the rest of the game then
/// plays out as already solved. It stays put whenever that is within the
/// margin of its best continuation and otherwise takes the lowest-index best
/// move.
pub fn verify_backward_induction<S: Scalar>(game: &PosetGame<S>, eps: &S, cap: usize) -> Result<(S, usize)> {
    game.validate()?;
    let n = game.len();
    if n > cap {
        return Err(Error::VerifierCap { size: n, cap });
    }
    let m = margin(eps);
    let mut outcome: Vec<usize> = (0..n).collect();
    for i in (1..=game.agents()).rev() {
        let w = &game.utilities[i];
        let next: Vec<usize> = (0..n)
            .map(|x| {
                let mut best: Option<(S, usize)> = None;
                for y in game.down[x].iter_ones() {
                    let v = w[outcome[y]].clone();
                    if best.as_ref().map_or(true, |(b, _)| v > *b) {
                        best = Some((v, y));
                    }
                }
                let (best_value, best_move) = best.expect("x ⪯ x");
                if within(&w[outcome[x]], &best_value, &m) {
                    outcome[x]
                } else {
                    outcome[best_move]
                }
            })
            .collect();
        outcome = next;
    }
    let w0 = &game.utilities[0];
    let mut best: Option<(S, usize)> = None;
    for y in game.down[game.start].iter_ones() {
        let v = w0[outcome[y]].clone();
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, outcome[y]));
        }
    }
    Ok(best.expect("start ⪯ start"))
}
