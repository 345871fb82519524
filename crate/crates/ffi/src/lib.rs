//! C ABI over the `stopgame` solver.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Strings returned through `char **` are
//! allocated here and must be released with [`stopgame_string_free`].
//! Every fallible call returns a [`StopgameStatus`]; on failure the message
//! is available from [`stopgame_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stopgame::random::{random_scenario, RandomSpec};
use stopgame::report::SolutionReport;
use stopgame::scenario::{Scenario, ScenarioFile};
use stopgame::{solve, verify_theorem, Caps, Comparison, Error, GameSolution, Mode};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopgameStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    VerificationFailed = 5,
    Overflow = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

/// A parsed and validated scenario.
pub struct StopgameScenario {
    file: ScenarioFile,
    scenario: Scenario,
}

/// A solved scenario.
pub struct StopgameSolution {
    scenario: Scenario,
    solution: GameSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: StopgameStatus, msg: impl Into<String>) -> StopgameStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> StopgameStatus {
    match e {
        Error::EnumerationOverflow { .. } => StopgameStatus::Overflow,
        Error::Invalid(_) | Error::Precondition(_) | Error::Mode(_) => StopgameStatus::Validation,
        Error::ParseRational(_) => StopgameStatus::Parse,
        _ => StopgameStatus::Internal,
    }
}

/// Runs `body`, converting panics into `Internal`.
fn guard(body: impl FnOnce() -> StopgameStatus) -> StopgameStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == StopgameStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(StopgameStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, StopgameStatus> {
    if p.is_null() {
        return Err(fail(StopgameStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(StopgameStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> StopgameStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            StopgameStatus::Ok
        }
        Err(_) => fail(StopgameStatus::Internal, "output contains a nul byte"),
    }
}

fn build(file: ScenarioFile) -> Result<StopgameScenario, StopgameStatus> {
    match file.build(None) {
        Ok(scenario) => Ok(StopgameScenario { file, scenario }),
        Err(violations) => {
            let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(fail(StopgameStatus::Validation, lines.join("\n")))
        }
    }
}

/// Parses and validates a scenario from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stopgame_scenario_from_json(
    json: *const c_char,
    out: *mut *mut StopgameScenario,
) -> StopgameStatus {
    guard(|| {
        if out.is_null() {
            return fail(StopgameStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file = match ScenarioFile::parse(text) {
            Ok(f) => f,
            Err(e) => return fail(StopgameStatus::Parse, e.to_string()),
        };
        match build(file) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(h));
                StopgameStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Generates the seeded random scenario used by the CLI's `--random`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stopgame_scenario_random(
    horizon: u32,
    outcomes: u32,
    seed: u64,
    out: *mut *mut StopgameScenario,
) -> StopgameStatus {
    guard(|| {
        if out.is_null() {
            return fail(StopgameStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        if outcomes == 0 {
            return fail(StopgameStatus::Validation, "outcomes must be positive");
        }
        let spec = RandomSpec {
            horizon: horizon as usize,
            outcomes: outcomes as usize,
            seed,
        };
        match build(random_scenario(&spec)) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(h));
                StopgameStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stopgame_scenario_free(scenario: *mut StopgameScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Canonical JSON of the scenario file (sorted keys).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_scenario_to_json(
    scenario: *const StopgameScenario,
    out: *mut *mut c_char,
) -> StopgameStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        write_string(out, (*scenario).file.to_json())
    })
}

/// Horizon and outcome count of a scenario.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_scenario_shape(
    scenario: *const StopgameScenario,
    horizon: *mut usize,
    outcomes: *mut usize,
) -> StopgameStatus {
    guard(|| {
        if scenario.is_null() || horizon.is_null() || outcomes.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        let space = &(*scenario).scenario.space;
        *horizon = space.horizon();
        *outcomes = space.num_outcomes();
        StopgameStatus::Ok
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solve(
    scenario: *const StopgameScenario,
    out: *mut *mut StopgameSolution,
) -> StopgameStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let sc = &(*scenario).scenario;
        match solve(&sc.payoff, &sc.space) {
            Ok(solution) => {
                *out = Box::into_raw(Box::new(StopgameSolution {
                    scenario: sc.clone(),
                    solution,
                }));
                StopgameStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `solution` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_free(solution: *mut StopgameSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Exact game value as a `"num/den"` string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_value(
    solution: *const StopgameSolution,
    out: *mut *mut c_char,
) -> StopgameStatus {
    guard(|| {
        if solution.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        write_string(out, (*solution).solution.value.to_string())
    })
}

/// Game value rounded to the nearest double.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_value_f64(
    solution: *const StopgameSolution,
    out: *mut f64,
) -> StopgameStatus {
    guard(|| {
        if solution.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        *out = (*solution).solution.value.to_f64();
        StopgameStatus::Ok
    })
}

unsafe fn copy_times(times: &[usize], buf: *mut usize, len: usize) -> StopgameStatus {
    if buf.is_null() {
        return fail(StopgameStatus::NullPointer, "null buffer");
    }
    if len < times.len() {
        return fail(
            StopgameStatus::BufferTooSmall,
            format!("buffer holds {len} entries, {} needed", times.len()),
        );
    }
    ptr::copy_nonoverlapping(times.as_ptr(), buf, times.len());
    StopgameStatus::Ok
}

/// Writes the inf-player's Dynkin stopping time, one entry per outcome.
///
/// # Safety
/// `buf` must hold at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_rho_d(
    solution: *const StopgameSolution,
    buf: *mut usize,
    len: usize,
) -> StopgameStatus {
    guard(|| {
        if solution.is_null() {
            return fail(StopgameStatus::NullPointer, "null solution");
        }
        copy_times((*solution).solution.rho_d.times(), buf, len)
    })
}

/// Writes the sup-player's Dynkin stopping time, one entry per outcome.
///
/// # Safety
/// `buf` must hold at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_tau_d(
    solution: *const StopgameSolution,
    buf: *mut usize,
    len: usize,
) -> StopgameStatus {
    guard(|| {
        if solution.is_null() {
            return fail(StopgameStatus::NullPointer, "null solution");
        }
        copy_times((*solution).solution.tau_d.times(), buf, len)
    })
}

/// Solution report as JSON, without enumeration values.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_solution_report_json(
    solution: *const StopgameSolution,
    out: *mut *mut c_char,
) -> StopgameStatus {
    guard(|| {
        if solution.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        let s = &*solution;
        write_string(out, SolutionReport::new(&s.scenario, &s.solution, Vec::new()).to_json())
    })
}

/// Solves and verifies against exhaustive enumeration, writing the full
/// report. Zero caps select the defaults; `eps` applies to float-mode
/// scenarios only. Returns `VerificationFailed` (with the report written)
/// when any check fails.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stopgame_verify_json(
    scenario: *const StopgameScenario,
    stopping_cap: u64,
    strategy_cap: u64,
    eps: f64,
    out: *mut *mut c_char,
) -> StopgameStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return fail(StopgameStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let sc = &(*scenario).scenario;
        let mut caps = Caps::default();
        if stopping_cap > 0 {
            caps.stopping = stopping_cap;
        }
        if strategy_cap > 0 {
            caps.strategies = strategy_cap;
        }
        let cmp = match sc.mode {
            Mode::Exact => Comparison::Exact,
            Mode::Float => Comparison::Tolerance(eps),
        };
        let solution = match solve(&sc.payoff, &sc.space) {
            Ok(s) => s,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let verification = match verify_theorem(&sc.payoff, &sc.space, &caps, cmp) {
            Ok(v) => v,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let report = SolutionReport::new(sc, &solution, Vec::new()).with_verification(verification);
        let passed = report.summary.passed;
        let failures = report.summary.failures.join("\n");
        let status = write_string(out, report.to_json());
        if status != StopgameStatus::Ok {
            return status;
        }
        if passed {
            StopgameStatus::Ok
        } else {
            fail(StopgameStatus::VerificationFailed, failures)
        }
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn stopgame_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stopgame_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn stopgame_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
