#![allow(dead_code)]

pub mod random;

use persuasion_core::utility::Piece;
use persuasion_core::{Belief, BeliefGrid, Prior, UtilityFunction};

pub const TEN_PI_THIRDS: f64 = 10.471975511965978;
pub const TEN_PI: f64 = 31.41592653589793;

pub fn b(x: f64) -> Belief {
    Belief::binary(x).unwrap()
}

/// Sender in the one-mediator example: flat-topped bumps around 0.2 and 0.8.
pub fn one_mediator_sender() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, 0.2, 0.2, vec![4.0, 0.0, -100.0]),
            Piece::polynomial(0.2, 0.8, 0.2, vec![3.0]).with_cosine(1.0, TEN_PI_THIRDS, 0.0),
            Piece::polynomial(0.8, 1.0, 0.8, vec![4.0, 0.0, -100.0]),
        ],
        true,
    )
    .unwrap()
}

pub fn one_mediator_mediator() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, 0.2, 0.2, vec![0.0, 0.0, 100.0]),
            Piece::polynomial(0.2, 0.4, 0.2, vec![1.0 / 3.0]).with_cosine(-1.0 / 3.0, TEN_PI, 0.0),
            Piece::polynomial(0.4, 1.0, 0.4, vec![0.0, 0.0, 11.0]),
        ],
        true,
    )
    .unwrap()
}

pub fn three_signal_sender() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, 0.5, 0.0, vec![0.0, 0.0, 0.0, 0.0, 96.0]),
            Piece::polynomial(0.5, 1.0, 1.0, vec![0.0, 0.0, 0.0, 0.0, 96.0]),
        ],
        true,
    )
    .unwrap()
}

pub fn three_signal_first() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, 0.25, 0.0, vec![0.0, 0.0, 16.0]),
            Piece::polynomial(0.25, 0.5, 0.5, vec![0.0, 0.0, 16.0]),
            Piece::polynomial(0.5, 1.0, 0.5, vec![0.0, 0.0, 24.0]),
        ],
        true,
    )
    .unwrap()
}

pub fn three_signal_second() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, 0.5, 0.25, vec![0.0, 0.0, 16.0]),
            Piece::polynomial(0.5, 1.0, 0.75, vec![0.0, 0.0, 16.0]),
        ],
        true,
    )
    .unwrap()
}

const W: f64 = 0.05;

/// Sender who wants the state revealed: 1 at the endpoints, 0 in between.
pub fn ideal_sender() -> UtilityFunction {
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, W, 0.0, vec![1.0, -1.0 / W]),
            Piece::polynomial(W, 1.0 - W, 0.0, vec![0.0]),
            Piece::polynomial(1.0 - W, 1.0, 1.0, vec![1.0, 1.0 / W]),
        ],
        true,
    )
    .unwrap()
}

fn tent(center: f64, height: f64) -> [Piece; 2] {
    [
        Piece::polynomial(center - W, center, center - W, vec![0.0, height / W]),
        Piece::polynomial(center, center + W, center, vec![height, -height / W]),
    ]
}

fn ends_and_tent(end: f64, center: f64, height: f64) -> UtilityFunction {
    let [up, down] = tent(center, height);
    UtilityFunction::piecewise(
        vec![
            Piece::polynomial(0.0, W, 0.0, vec![end, -end / W]),
            Piece::polynomial(W, center - W, 0.0, vec![0.0]),
            up,
            down,
            Piece::polynomial(center + W, 1.0 - W, 0.0, vec![0.0]),
            Piece::polynomial(1.0 - W, 1.0, 1.0, vec![end, end / W]),
        ],
        true,
    )
    .unwrap()
}

pub fn ideal_first() -> UtilityFunction {
    ends_and_tent(0.5, 0.25, 1.0)
}

pub fn ideal_second() -> UtilityFunction {
    ends_and_tent(1.0, 0.5, 0.8)
}

pub fn small_grid() -> BeliefGrid {
    BeliefGrid::binary(&[0.0, 0.25, 0.5, 1.0]).unwrap()
}

pub fn prior(x: f64) -> Prior {
    Prior::binary(x).unwrap()
}
