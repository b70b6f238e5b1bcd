use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Input { message: String, hint: Option<String> },
    #[error(transparent)]
    Solver(#[from] persuasion_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self::Input { message: message.into(), hint: None }
    }

    pub fn with_hint(message: impl Into<String>, hint: impl Into<String>) -> Self {
        Self::Input { message: message.into(), hint: Some(hint.into()) }
    }

    /// Stable exit codes: 2 for bad input, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        use persuasion_core::Error as E;
        match self {
            Self::Input { .. } | Self::Io(_) => 2,
            Self::Solver(E::PriorNotRepresentable { .. } | E::DiscontinuousAtZeroEps(_)) => 2,
            Self::Solver(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        if self.exit_code() == 2 {
            "input"
        } else {
            "solver"
        }
    }

    pub fn hint(&self) -> Option<String> {
        use persuasion_core::Error as E;
        match self {
            Self::Input { hint, .. } => hint.clone(),
            Self::Solver(E::PriorNotRepresentable { .. }) => {
                Some("put the prior on the grid (add it to grid.points or pick a matching step)".into())
            }
            Self::Solver(E::DiscontinuousAtZeroEps(_)) => Some("pass --eps with a positive value".into()),
            Self::Solver(E::LatticeCap { .. } | E::VerifierCap { .. }) => {
                Some("use a coarser grid or a smaller denominator".into())
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
