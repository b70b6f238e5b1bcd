//! Seeded random instances for property runs and `verify --random`.

use persuasion_core::{BeliefGrid, Prior, UtilityFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::Problem;

/// Continuous piecewise-linear utility with at most `max_pieces` pieces and
/// knots on multiples of 0.01.
pub fn piecewise_linear<R: Rng>(rng: &mut R, max_pieces: usize) -> UtilityFunction {
    let pieces = rng.gen_range(1..=max_pieces);
    let mut knots: Vec<u32> = (0..pieces - 1).map(|_| rng.gen_range(1..100)).collect();
    knots.push(0);
    knots.push(100);
    knots.sort_unstable();
    knots.dedup();
    let pts: Vec<(f64, f64)> = knots
        .iter()
        .map(|&k| (k as f64 / 100.0, rng.gen_range(-100..=100) as f64 / 100.0))
        .collect();
    UtilityFunction::sampled_binary(&pts).expect("knots are sorted and contain both ends")
}

/// Utility interpolating random values at the points of a binary grid.
pub fn sampled_on<R: Rng>(rng: &mut R, grid: &BeliefGrid) -> UtilityFunction {
    let pts: Vec<(f64, f64)> = grid.xs().into_iter().map(|x| (x, rng.gen_range(-100..=100) as f64 / 100.0)).collect();
    UtilityFunction::sampled_binary(&pts).expect("grid contains both ends")
}

/// Binary grid with 0, 1 and `inner` distinct points on multiples of 0.05.
pub fn binary_grid<R: Rng>(rng: &mut R, inner: usize) -> BeliefGrid {
    let mut ks: Vec<u32> = vec![0, 20];
    while ks.len() < inner.min(19) + 2 {
        let k = rng.gen_range(1..20);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    ks.sort_unstable();
    BeliefGrid::binary(&ks.iter().map(|&k| k as f64 / 20.0).collect::<Vec<_>>()).expect("distinct points")
}

/// Binary chain problem with the prior on a random inner grid point.
pub fn chain_problem<R: Rng>(rng: &mut R, mediators: usize, inner: usize, denominator: u32) -> Problem {
    let grid = binary_grid(rng, inner);
    let xs = grid.xs();
    let p = xs[rng.gen_range(1..xs.len() - 1)];
    Problem {
        sender: piecewise_linear(rng, 8),
        mediators: (0..mediators).map(|_| piecewise_linear(rng, 8)).collect(),
        prior: Prior::binary(p).expect("grid point"),
        grid,
        denominator: Some(denominator),
        eps: 0.0,
    }
}

/// A small instance for `verify --random`.
pub fn small_problem(seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mediators = rng.gen_range(1..=3);
    let inner = rng.gen_range(1..=3);
    let q = rng.gen_range(2..=6);
    chain_problem(&mut rng, mediators, inner, q)
}
