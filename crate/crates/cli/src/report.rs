use persuasion_core::lattice::LatticeDiagnostics;
use serde::{Deserialize, Serialize};

use crate::problem::ProblemFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// The problem as solved, with command-line overrides applied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemFile>,
    pub settings: Settings,
    pub result: Payload,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Settings {
    pub rational: bool,
    pub parallel: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub belief: Vec<f64>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// `direct`, `single` or `chain`.
    pub solver: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    pub distribution: Vec<Atom>,
    pub support_size: usize,
    pub used_no_information: bool,
    /// `|M_1|, ..., |M_{n+1}|` for lattice runs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub feasible_set_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub prior: f64,
    pub v_s: f64,
    pub cav_unconstrained: f64,
    pub cav_constrained: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    pub mean: Vec<f64>,
    /// How far the utility at `mean` exceeds the mixture of chord values.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Garbling {
    pub gain: f64,
    pub distribution: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Solve(Solution),
    Sweep {
        solver: String,
        rows: Vec<SweepRow>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        svg: Option<String>,
    },
    Check {
        mediator: usize,
        query: String,
        verdict: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        violation: Option<Violation>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        garbling: Option<Garbling>,
    },
    Verify {
        chain_value: f64,
        backward_induction_value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exact_values: Option<(String, String)>,
        elements: usize,
        pass: bool,
    },
    Plot {
        input: String,
        output: String,
        rows: usize,
    },
}
