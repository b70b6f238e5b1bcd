//! JSON problem files.

use std::path::Path;

use persuasion_core::chain::{check_prior, ChainProblem};
use persuasion_core::utility::Piece;
use persuasion_core::{Belief, BeliefGrid, Prior, UtilityFunction};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A belief written either as the probability of state 1 (two states) or as
/// the full probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BeliefSpec {
    Binary(f64),
    Vector(Vec<f64>),
}

impl BeliefSpec {
    pub fn to_belief(&self, states: usize) -> persuasion_core::Result<Belief> {
        match self {
            Self::Binary(x) if states == 2 => Belief::binary(*x),
            Self::Binary(x) => Err(persuasion_core::Error::DimensionMismatch(format!(
                "scalar belief {x} needs 2 states, the problem has {states}"
            ))),
            Self::Vector(v) if v.len() == states => Belief::new(v),
            Self::Vector(v) => Err(persuasion_core::Error::DimensionMismatch(format!(
                "belief has {} coordinates, the problem has {states} states",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineSpec {
    pub amp: f64,
    pub freq: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: f64,
    pub to: f64,
    /// Polynomial terms are powers of `x - origin`.
    #[serde(default)]
    pub origin: f64,
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosine: Option<CosineSpec>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilitySpec {
    Piecewise {
        #[serde(default = "yes")]
        continuous: bool,
        pieces: Vec<PieceSpec>,
    },
    /// Values at `points`, or at the simplex mesh of `resolution` in mesh order.
    Sampled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<BeliefSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<u32>,
        values: Vec<f64>,
    },
    Constant {
        value: f64,
    },
}

impl UtilitySpec {
    pub fn build(&self, states: usize) -> persuasion_core::Result<UtilityFunction> {
        match self {
            Self::Piecewise { continuous, pieces } => {
                if states != 2 {
                    return Err(persuasion_core::Error::Unsupported("closed-form pieces need 2 states".into()));
                }
                let pieces = pieces
                    .iter()
                    .map(|p| {
                        let piece = Piece::polynomial(p.from, p.to, p.origin, p.coefficients.clone());
                        match &p.cosine {
                            Some(c) => piece.with_cosine(c.amp, c.freq, c.phase),
                            None => piece,
                        }
                    })
                    .collect();
                UtilityFunction::piecewise(pieces, *continuous)
            }
            Self::Sampled { points, resolution, values } => {
                let grid = match (points, resolution) {
                    (Some(pts), None) => {
                        BeliefGrid::explicit(pts.iter().map(|p| p.to_belief(states)).collect::<Result<_, _>>()?)?
                    }
                    (None, Some(r)) => BeliefGrid::simplex(states, *r)?,
                    _ => {
                        return Err(persuasion_core::Error::InvalidUtility(
                            "sampled utilities need exactly one of `points` and `resolution`".into(),
                        ))
                    }
                };
                if points.is_some() {
                    // Values follow the listed points; the grid sorts them.
                    let listed: Vec<Belief> =
                        points.as_ref().unwrap().iter().map(|p| p.to_belief(states)).collect::<Result<_, _>>()?;
                    if listed.len() != values.len() {
                        return Err(persuasion_core::Error::InvalidUtility(format!(
                            "{} points but {} values",
                            listed.len(),
                            values.len()
                        )));
                    }
                    let mut sorted = vec![0.0; values.len()];
                    for (b, v) in listed.iter().zip(values) {
                        sorted[grid.index_of(b).expect("listed point is on its grid")] = *v;
                    }
                    UtilityFunction::sampled(grid, sorted)
                } else {
                    UtilityFunction::sampled(grid, values.clone())
                }
            }
            Self::Constant { value } => Ok(UtilityFunction::constant(states, *value)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<BeliefSpec>>,
    /// Simplex mesh with spacing `1 / resolution`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,
}

impl GridSpec {
    pub fn build(&self, states: usize) -> persuasion_core::Result<BeliefGrid> {
        match (self.step, &self.points, self.resolution) {
            (Some(step), None, None) if states == 2 => BeliefGrid::uniform(step),
            (Some(step), None, None) => {
                let r = (1.0 / step).round();
                if (r * step - 1.0).abs() > 1e-9 {
                    return Err(persuasion_core::Error::InvalidGrid(format!("1/{step} is not an integer")));
                }
                BeliefGrid::simplex(states, r as u32)
            }
            (None, Some(pts), None) => {
                BeliefGrid::explicit(pts.iter().map(|p| p.to_belief(states)).collect::<Result<_, _>>()?)
            }
            (None, None, Some(r)) => BeliefGrid::simplex(states, r),
            _ => Err(persuasion_core::Error::InvalidGrid(
                "give exactly one of `step`, `points` and `resolution`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Free text shown alongside results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub states: usize,
    pub prior: BeliefSpec,
    pub sender_utility: UtilitySpec,
    #[serde(default)]
    pub mediator_utilities: Vec<UtilitySpec>,
    pub grid: GridSpec,
    /// Weight denominator `Q` of the distribution lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<u32>,
    #[serde(default)]
    pub eps: f64,
}

/// A validated problem. `denominator` stays optional because the
/// one-mediator solver does not need a lattice.
#[derive(Debug, Clone)]
pub struct Problem {
    pub sender: UtilityFunction,
    pub mediators: Vec<UtilityFunction>,
    pub prior: Prior,
    pub grid: BeliefGrid,
    pub denominator: Option<u32>,
    pub eps: f64,
}

impl Problem {
    pub fn chain(&self) -> CliResult<ChainProblem> {
        let denominator = self.denominator.ok_or_else(|| {
            CliError::with_hint("this run needs a distribution lattice", "set `denominator` in the file or pass --denominator")
        })?;
        Ok(self.chain_with(denominator))
    }

    pub fn chain_with(&self, denominator: u32) -> ChainProblem {
        ChainProblem {
            sender: self.sender.clone(),
            mediators: self.mediators.clone(),
            prior: self.prior.clone(),
            grid: self.grid.clone(),
            denominator,
            eps: self.eps,
        }
    }

    pub fn states(&self) -> usize {
        self.prior.states()
    }
}

fn field<T>(name: &str, r: persuasion_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::input(format!("{name}: {e}")))
}

impl ProblemFile {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| {
            CliError::input(format!("{origin}:{}:{}: {}", e.line(), e.column(), strip_position(&e.to_string())))
        })
    }

    pub fn resolve(&self) -> CliResult<Problem> {
        if self.states < 2 {
            return Err(CliError::input(format!("states: need at least 2, got {}", self.states)));
        }
        let k = self.states;
        let prior = Prior::from(field("prior", self.prior.to_belief(k))?);
        let grid = field("grid", self.grid.build(k))?;
        let sender = field("sender_utility", self.sender_utility.build(k))?;
        let mediators = self
            .mediator_utilities
            .iter()
            .enumerate()
            .map(|(i, u)| field(&format!("mediator_utilities[{i}]"), u.build(k)))
            .collect::<CliResult<Vec<_>>>()?;
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(CliError::input(format!("eps: must be finite and nonnegative, got {}", self.eps)));
        }
        if self.denominator == Some(0) {
            return Err(CliError::input("denominator: must be at least 1"));
        }
        let problem = Problem { sender, mediators, prior, grid, denominator: self.denominator, eps: self.eps };
        if let Some(q) = self.denominator {
            check_prior(&problem.chain_with(q))?;
        }
        Ok(problem)
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn read_problem_file(path: &Path) -> CliResult<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text, &path.display().to_string())
}

pub fn load_problem(path: &Path) -> CliResult<Problem> {
    read_problem_file(path)?.resolve()
}
