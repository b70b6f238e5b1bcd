use persuasion_core::{BeliefGrid, UtilityFunction};
use rand::Rng;

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
    UtilityFunction::sampled_binary(&pts).unwrap()
}

/// Sorted binary grid containing 0 and 1 plus `inner` points on multiples of 0.05.
pub fn binary_grid<R: Rng>(rng: &mut R, inner: usize) -> BeliefGrid {
    let mut ks: Vec<u32> = vec![0, 20];
    while ks.len() < inner + 2 {
        let k = rng.gen_range(1..20);
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    ks.sort_unstable();
    let xs: Vec<f64> = ks.iter().map(|&k| k as f64 / 20.0).collect();
    BeliefGrid::binary(&xs).unwrap()
}

/// Utility interpolating random values at the points of a binary grid.
pub fn sampled_on<R: Rng>(rng: &mut R, grid: &BeliefGrid) -> UtilityFunction {
    let pts: Vec<(f64, f64)> = grid.xs().into_iter().map(|x| (x, rng.gen_range(-100..=100) as f64 / 100.0)).collect();
    UtilityFunction::sampled_binary(&pts).unwrap()
}
