//! Library side of the `mixsing` command: each subcommand builds a typed,
//! serializable report, and [`render`] turns reports into plain text.

pub mod commands;
pub mod render;
pub mod report;

use std::fmt;

use mixsing::Error;

/// Pipeline stage that refused an input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Newton,
    Classify,
    Nondegen,
    Toric,
    Invariants,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Newton => "newton",
            Stage::Classify => "classify",
            Stage::Nondegen => "nondegen",
            Stage::Toric => "toric",
            Stage::Invariants => "invariants",
        }
    }
}

/// A refusal together with the process exit code it maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub stage: Stage,
    pub error: Error,
}

impl CliError {
    pub fn new(stage: Stage, error: Error) -> Self {
        Self { stage, error }
    }

    /// 1 for parse errors, 2 for refused preconditions, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self.error {
            Error::Parse { .. } => 1,
            Error::Precondition(_) => 2,
            Error::NonConvergence(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.error {
            Error::Parse { .. } => "parse",
            Error::Precondition(_) => "precondition",
            Error::NonConvergence(_) => "non_convergence",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage.name(), self.error)
    }
}

impl std::error::Error for CliError {}

/// Tag a core result with the stage that produced it.
pub(crate) trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, CliError>;
}

impl<T> AtStage<T> for mixsing::Result<T> {
    fn at(self, stage: Stage) -> Result<T, CliError> {
        self.map_err(|e| CliError::new(stage, e))
    }
}
