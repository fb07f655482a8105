use crate::lattice::Mode;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which state invariant a validation failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Reality,
    Incompressibility,
    Finite,
    MissingMode,
    DuplicateMode,
    OutOfLattice,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Invariant::Reality => "reality",
            Invariant::Incompressibility => "incompressibility",
            Invariant::Finite => "finite",
            Invariant::MissingMode => "missing-mode",
            Invariant::DuplicateMode => "duplicate-mode",
            Invariant::OutOfLattice => "out-of-lattice",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state violates {invariant} invariant at mode {mode}: {detail}")]
    Validation {
        invariant: Invariant,
        mode: Mode,
        detail: String,
    },

    #[error("simulation diverged at step {step}")]
    Diverged { step: usize },

    #[error("malformed state document: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
