use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("time {t} out of range 0..={horizon}")]
    TimeOutOfRange { t: usize, horizon: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{what} enumeration overflow: size {size} exceeds cap {cap}")]
    EnumerationOverflow { what: &'static str, size: String, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a stopping time: {0}")]
    NotStoppingTime(String),
    #[error("{} violation(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<Violation>),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("stopping time is not a member of the ambient set")]
    NotInAmbient,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Machine-readable class of a validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    ProbabilityNonpositive,
    ProbabilityMass,
    PartitionCover,
    FiltrationLength,
    FiltrationRefinement,
    PayoffMeasurability,
    ProcessAdaptedness,
    DynkinOrder,
    PayoffPrecondition,
    Dimension,
    Mode,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ProbabilityNonpositive => "PROBABILITY_NONPOSITIVE",
            Self::ProbabilityMass => "PROBABILITY_MASS",
            Self::PartitionCover => "PARTITION_COVER",
            Self::FiltrationLength => "FILTRATION_LENGTH",
            Self::FiltrationRefinement => "FILTRATION_REFINEMENT",
            Self::PayoffMeasurability => "PAYOFF_MEASURABILITY",
            Self::ProcessAdaptedness => "PROCESS_ADAPTEDNESS",
            Self::DynkinOrder => "DYNKIN_ORDER",
            Self::PayoffPrecondition => "PAYOFF_PRECONDITION",
            Self::Dimension => "DIMENSION",
            Self::Mode => "MODE",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failed invariant; printed as `<code> <location> <message>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub location: String,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.location, self.message)
    }
}
