//! Machine-readable solution reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::oracle::{GameValueReport, Verification};
use crate::payoff::Mode;
use crate::rational::Rational;
use crate::scenario::Scenario;
use crate::solver::GameSolution;
use crate::stopping::StoppingTime;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub passed: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub scenario: String,
    pub mode: Mode,
    pub approximate: bool,
    pub value: Rational,
    /// Per time, one value per atom of the partition at that time.
    pub v1: Vec<Vec<Rational>>,
    pub v2: Vec<Vec<Rational>>,
    pub v: Vec<Vec<Rational>>,
    pub rho_d: Vec<usize>,
    pub tau_d: Vec<usize>,
    /// `rho_u[t]` as an outcome-indexed vector.
    pub rho_u: Vec<Vec<usize>>,
    pub tau_u: Vec<Vec<usize>>,
    #[serde(default)]
    pub game_values: Option<GameValueReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

fn times(family: &[StoppingTime]) -> Vec<Vec<usize>> {
    family.iter().map(|s| s.times().to_vec()).collect()
}

impl SolutionReport {
    pub fn new(scenario: &Scenario, sol: &GameSolution, failures: Vec<String>) -> Self {
        let space = &scenario.space;
        Self {
            scenario: scenario.name.clone(),
            mode: scenario.mode,
            approximate: scenario.mode == Mode::Float,
            value: sol.value.clone(),
            v1: sol.v1.per_atom(space),
            v2: sol.v2.per_atom(space),
            v: sol.v.per_atom(space),
            rho_d: sol.rho_d.times().to_vec(),
            tau_d: sol.tau_d.times().to_vec(),
            rho_u: times(&sol.rho_u),
            tau_u: times(&sol.tau_u),
            game_values: None,
            summary: Summary {
                passed: failures.is_empty(),
                failures,
                warnings: Vec::new(),
            },
            timing_us: None,
        }
    }

    pub fn with_verification(mut self, verification: Verification) -> Self {
        self.approximate |= verification.report.approximate;
        self.summary.failures.extend(verification.failures);
        self.summary.warnings.extend(verification.warnings);
        self.summary.passed = self.summary.failures.is_empty();
        self.game_values = Some(verification.report);
        self
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario  {}", self.scenario);
        if self.approximate {
            let _ = writeln!(out, "APPROXIMATE (float mode)");
        }
        let _ = writeln!(out, "value     {}", self.value);
        let _ = writeln!(out, "rho_d     {:?}", self.rho_d);
        let _ = writeln!(out, "tau_d     {:?}", self.tau_d);
        for (t, ((a, b), c)) in self.v1.iter().zip(&self.v2).zip(&self.v).enumerate() {
            let join = |xs: &[Rational]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "t={t}  v1=[{}]  v=[{}]  v2=[{}]", join(a), join(c), join(b));
        }
        for t in 0..self.rho_u.len() {
            let _ = writeln!(out, "rho_u[{t}]={:?}  tau_u[{t}]={:?}", self.rho_u[t], self.tau_u[t]);
        }
        if let Some(g) = &self.game_values {
            out.push_str(&g.to_string());
        }
        for w in &self.summary.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for f in &self.summary.failures {
            let _ = writeln!(out, "FAILED: {f}");
        }
        let _ = writeln!(out, "{}", if self.summary.passed { "PASS" } else { "FAIL" });
        if let Some(us) = self.timing_us {
            let _ = writeln!(out, "elapsed {:.3} ms", us as f64 / 1000.0);
        }
        out
    }
}
