//! `stopgame validate|solve|verify|values`.
//!
//! Exit codes: 0 success, 1 validation or assertion failure, 2 parse or
//! usage error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::oracle::{verify_theorem, Caps, Comparison};
use crate::payoff::Mode;
use crate::random::{random_scenario, RandomSpec};
use crate::report::SolutionReport;
use crate::scenario::{load, Scenario, ScenarioFile};
use crate::solver::{solution_invariant_failures, solve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "stopgame",
    version,
    about = "Exact solver and verifier for discrete-time stopping games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a scenario against the space and payoff validators.
    Validate(CommonArgs),
    /// Solve a scenario and print the value, processes and stopping rules.
    Solve(CommonArgs),
    /// Solve and verify against exhaustive enumeration.
    Verify(CommonArgs),
    /// Print the table of brute-force game values.
    Values(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Scenario file (JSON). Not needed with --random.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
    /// Cap overrides, e.g. `stopping=64,strategies=10000000`.
    #[arg(long)]
    caps: Option<String>,
    /// Generate a scenario instead of reading one, e.g. `T=3,outcomes=6,seed=42`.
    #[arg(long)]
    random: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Absolute tolerance for float-mode comparisons.
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// Include elapsed time in the output.
    #[arg(long)]
    timing: bool,
}

struct Loaded {
    file: ScenarioFile,
    caps: Caps,
    mode: Option<Mode>,
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

fn load_args(args: &CommonArgs) -> Result<Loaded, String> {
    let file = match (&args.random, &args.file) {
        (Some(_), Some(_)) => return Err("pass either a scenario file or --random, not both".into()),
        (Some(spec), None) => random_scenario(&spec.parse::<RandomSpec>().map_err(|e| e.to_string())?),
        (None, Some(path)) => load(path).map_err(|e| e.to_string())?,
        (None, None) => return Err("a scenario file or --random is required".into()),
    };
    let mut caps = Caps::from_env().map_err(|e| format!("{}: {e}", crate::oracle::CAPS_ENV))?;
    if let Some(spec) = &file.caps {
        caps = spec.apply(caps);
    }
    if let Some(over) = &args.caps {
        caps = caps.with_overrides(over).map_err(|e| e.to_string())?;
    }
    let mode = args.mode.map(|m| match m {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    });
    Ok(Loaded { file, caps, mode })
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (command, args) = match &cli.command {
        Command::Validate(a) => ("validate", a),
        Command::Solve(a) => ("solve", a),
        Command::Verify(a) => ("verify", a),
        Command::Values(a) => ("values", a),
    };
    let loaded = match load_args(args) {
        Ok(l) => l,
        Err(msg) => return usage(err, msg),
    };
    let started = Instant::now();
    let scenario = match loaded.file.build(loaded.mode) {
        Ok(s) => s,
        Err(violations) => {
            let target: &mut dyn Write = if command == "validate" { out } else { err };
            for v in &violations {
                let _ = writeln!(target, "{v}");
            }
            return EXIT_FAILED;
        }
    };
    match command {
        "validate" => {
            match args.output {
                Output::Text => {
                    let _ = writeln!(out, "ok {}", scenario.name);
                }
                Output::Json => {
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({"scenario": scenario.name, "valid": true, "violations": []})
                    );
                }
            }
            EXIT_OK
        }
        "solve" => solve_command(&scenario, args, started, out, err),
        "verify" => verify_command(&scenario, &loaded.caps, args, started, out, err),
        _ => values_command(&scenario, &loaded.caps, args, out, err),
    }
}

fn comparison(scenario: &Scenario, eps: f64) -> Comparison {
    match scenario.mode {
        Mode::Exact => Comparison::Exact,
        Mode::Float => Comparison::Tolerance(eps),
    }
}

fn emit(report: &mut SolutionReport, args: &CommonArgs, started: Instant, out: &mut dyn Write) {
    if args.timing {
        report.timing_us = Some(started.elapsed().as_micros() as u64);
    }
    let _ = match args.output {
        Output::Json => writeln!(out, "{}", report.to_json()),
        Output::Text => write!(out, "{}", report.to_text()),
    };
}

fn solve_command(
    scenario: &Scenario,
    args: &CommonArgs,
    started: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match solve(&scenario.payoff, &scenario.space) {
        Ok(sol) => {
            let failures = solution_invariant_failures(&sol, &scenario.payoff, &scenario.space);
            let mut report = SolutionReport::new(scenario, &sol, failures);
            emit(&mut report, args, started, out);
            if report.summary.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_FAILED
        }
    }
}

fn verify_command(
    scenario: &Scenario,
    caps: &Caps,
    args: &CommonArgs,
    started: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = solve(&scenario.payoff, &scenario.space).and_then(|sol| {
        verify_theorem(&scenario.payoff, &scenario.space, caps, comparison(scenario, args.eps)).map(|v| (sol, v))
    });
    match result {
        Ok((sol, verification)) => {
            let mut report = SolutionReport::new(scenario, &sol, Vec::new()).with_verification(verification);
            emit(&mut report, args, started, out);
            for w in &report.summary.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if report.summary.passed {
                EXIT_OK
            } else {
                for f in &report.summary.failures {
                    let _ = writeln!(err, "failed: {f}");
                }
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_FAILED
        }
    }
}

fn values_command(
    scenario: &Scenario,
    caps: &Caps,
    args: &CommonArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match verify_theorem(&scenario.payoff, &scenario.space, caps, comparison(scenario, args.eps)) {
        Ok(v) => {
            let _ = match args.output {
                Output::Json => {
                    let value = serde_json::to_value(&v.report).expect("report serializes");
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&value).expect("value serializes")
                    )
                }
                Output::Text => write!(out, "{}", v.report),
            };
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_FAILED
        }
    }
}
