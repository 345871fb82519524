//! Scenario files: a filtered space plus a payoff description, as JSON.
//!
//! Rationals are `"num/den"` strings; filtration atoms are lists of outcome
//! indices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Violation, ViolationCode};
use crate::oracle::Caps;
use crate::payoff::{validate_payoff, BiPayoff, Mode, PayoffSpec};
use crate::rational::Rational;
use crate::space::{validate_space, FilteredSpace, Outcome, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSpec {
    pub label: String,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub horizon: usize,
    pub outcomes: Vec<OutcomeSpec>,
    pub filtration: Vec<Partition>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CapsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopping: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<u64>,
}

impl CapsSpec {
    pub fn apply(&self, mut caps: Caps) -> Caps {
        if let Some(s) = self.stopping {
            caps.stopping = s;
        }
        if let Some(s) = self.strategies {
            caps.strategies = s;
        }
        caps
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub space: SpaceSpec,
    pub payoff: PayoffSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
    #[serde(default)]
    pub mode: Mode,
}

/// A JSON syntax or schema error with its position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A scenario that passed both validators.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub space: FilteredSpace,
    pub payoff: BiPayoff,
    pub mode: Mode,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("scenario serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn space(&self) -> FilteredSpace {
        FilteredSpace::from_parts_unchecked(
            self.space.horizon,
            self.space
                .outcomes
                .iter()
                .map(|o| Outcome {
                    label: o.label.clone(),
                    probability: o.probability.clone(),
                })
                .collect(),
            self.space.filtration.clone(),
        )
    }

    /// Runs the space and payoff validators; returns the scenario only when
    /// both come back empty. `mode` overrides the file's own mode.
    pub fn build(&self, mode: Option<Mode>) -> Result<Scenario, Vec<Violation>> {
        let mode = mode.unwrap_or(self.mode);
        let space = self.space();
        let violations = validate_space(&space);
        if !violations.is_empty() {
            return Err(violations);
        }
        let payoff = self.payoff.build(&space, mode).map_err(|e| self.payoff_violations(e))?;
        match validate_payoff(&payoff, &space) {
            Ok(v) if v.is_empty() => Ok(Scenario {
                name: self.name.clone(),
                space,
                payoff,
                mode,
            }),
            Ok(v) => Err(v),
            Err(e) => Err(self.payoff_violations(e)),
        }
    }

    fn payoff_violations(&self, e: Error) -> Vec<Violation> {
        let location = format!("payoff.{}", self.payoff.generator_name());
        match e {
            Error::Invalid(v) => v
                .into_iter()
                .map(|x| Violation::new(x.code, format!("{location} {}", x.location), x.message))
                .collect(),
            Error::Precondition(m) if matches!(self.payoff, PayoffSpec::Dynkin { .. }) => {
                vec![Violation::new(ViolationCode::DynkinOrder, location, m)]
            }
            Error::Precondition(m) => vec![Violation::new(ViolationCode::PayoffPrecondition, location, m)],
            Error::Mode(m) => vec![Violation::new(ViolationCode::Mode, location, m)],
            other => vec![Violation::new(ViolationCode::Dimension, location, other.to_string())],
        }
    }
}

/// Reads a scenario file; I/O failures are reported as parse errors at 0:0.
pub fn load(path: &Path) -> Result<ScenarioFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    ScenarioFile::parse(&text)
}

/// Scenario description of an already-built space with the given payoff spec.
pub fn describe(name: &str, space: &FilteredSpace, payoff: PayoffSpec) -> ScenarioFile {
    ScenarioFile {
        name: name.to_string(),
        description: None,
        space: SpaceSpec {
            horizon: space.horizon(),
            outcomes: space
                .outcomes()
                .iter()
                .map(|o| OutcomeSpec {
                    label: o.label.clone(),
                    probability: o.probability.clone(),
                })
                .collect(),
            filtration: space.filtration().to_vec(),
        },
        payoff,
        caps: None,
        mode: Mode::Exact,
    }
}
