//! Brute-force game values and the end-to-end verifier.
//!
//! Every value here is obtained by exhaustive enumeration of stopping times
//! and, when small enough, of all Type I / Type II strategies. Nothing in
//! this module reuses the backward recursions except to fetch the solver's
//! answer that is being checked.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::payoff::BiPayoff;
use crate::rational::Rational;
use crate::solver::{
    build_rho_star, build_tau_starstar, corollary_identities, dynkin_payoff, rho_star_response,
    solution_invariant_failures, solve, tau_starstar_response, GameSolution,
};
use crate::space::{cond_exp, expectation, FilteredSpace};
use crate::stopping::{
    enumerate_stopping_times_capped, enumerate_strategies_capped, Kind, StoppingTime, StoppingTimeSet,
    DEFAULT_STRATEGY_CAP,
};

/// Environment variable overriding the default caps, e.g. `stopping=64,strategies=10000000`.
pub const CAPS_ENV: &str = "STOPGAME_CAPS";

/// Enumeration limits for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest `|T|` that is enumerated.
    pub stopping: u64,
    /// Largest `|T|^|T|` for which strategies are enumerated.
    pub strategies: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            stopping: 64,
            strategies: DEFAULT_STRATEGY_CAP,
        }
    }
}

impl Caps {
    /// Defaults, overridden by `STOPGAME_CAPS` when it is set and parses.
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var(CAPS_ENV) {
            Ok(s) if !s.trim().is_empty() => Caps::default().with_overrides(&s),
            _ => Ok(Caps::default()),
        }
    }

    /// Applies `key=value` overrides separated by commas.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, Error> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("cap override {part:?} is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("cap value {value:?} is not an integer")))?;
            match key.trim() {
                "stopping" => self.stopping = value,
                "strategies" => self.strategies = value,
                other => return Err(Error::Precondition(format!("unknown cap {other:?}"))),
            }
        }
        Ok(self)
    }
}

impl FromStr for Caps {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Caps::default().with_overrides(s)
    }
}

/// How verifier equalities are judged.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Comparison {
    #[default]
    Exact,
    /// Absolute tolerance on the float images; marks the report approximate.
    Tolerance(f64),
}

impl Comparison {
    fn eq(&self, a: &Rational, b: &Rational) -> bool {
        match self {
            Comparison::Exact => a == b,
            Comparison::Tolerance(eps) => (a.to_f64() - b.to_f64()).abs() <= *eps,
        }
    }

    fn le(&self, a: &Rational, b: &Rational) -> bool {
        match self {
            Comparison::Exact => a <= b,
            Comparison::Tolerance(eps) => a.to_f64() <= b.to_f64() + eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EnumerationSizes {
    pub stopping_times: Option<u64>,
    pub type_i: Option<u64>,
    pub type_ii: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub value: String,
    pub reason: String,
}

/// All game values of one scenario. Absent entries were skipped (see `skipped`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameValueReport {
    /// inf over stopping times of sup over stopping times.
    pub a_bar: Option<Rational>,
    /// sup over stopping times of inf over stopping times.
    pub a_under: Option<Rational>,
    /// Outer inf-player restricted to Type I strategies.
    pub b_bar: Option<Rational>,
    /// Outer sup-player restricted to Type I strategies.
    pub b_under: Option<Rational>,
    /// Outer inf-player restricted to Type II strategies.
    pub c_bar: Option<Rational>,
    /// Outer sup-player restricted to Type II strategies.
    pub c_under: Option<Rational>,
    /// Upper game value (same class as `c_bar`).
    pub v_bar: Option<Rational>,
    /// Lower game value (same class as `b_under`).
    pub v_under: Option<Rational>,
    pub solver_value: Rational,
    /// `max_tau E[U(rho*(tau), tau)]` over enumerated stopping times.
    pub best_response_upper: Option<Rational>,
    /// `min_rho E[U(rho, tau**(rho))]` over enumerated stopping times.
    pub best_response_lower: Option<Rational>,
    /// `min` over Type II `rho` of the payoff against the constructed reply `tau*(rho)`.
    pub reply_upper: Option<Rational>,
    /// `max` over Type I `tau` of the payoff against the constructed reply `rho**(tau)`.
    pub reply_lower: Option<Rational>,
    pub enumeration_sizes: EnumerationSizes,
    /// Observational only: `b_bar == c_under`.
    pub b_bar_equals_c_under: Option<bool>,
    /// Observational only: `b_under == c_bar`.
    pub b_under_equals_c_bar: Option<bool>,
    pub approximate: bool,
    pub skipped: Vec<Skip>,
}

impl GameValueReport {
    fn empty(solver_value: Rational) -> Self {
        Self {
            a_bar: None,
            a_under: None,
            b_bar: None,
            b_under: None,
            c_bar: None,
            c_under: None,
            v_bar: None,
            v_under: None,
            solver_value,
            best_response_upper: None,
            best_response_lower: None,
            reply_upper: None,
            reply_lower: None,
            enumeration_sizes: EnumerationSizes::default(),
            b_bar_equals_c_under: None,
            b_under_equals_c_bar: None,
            approximate: false,
            skipped: Vec::new(),
        }
    }

    fn skip(&mut self, values: &[&str], reason: &str) {
        for v in values {
            self.skipped.push(Skip {
                value: (*v).to_string(),
                reason: reason.to_string(),
            });
        }
    }
}

/// Which player chooses a strategy in the outer position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterPlayer {
    Inf,
    Sup,
}

/// Payoff matrix `M[i][j] = E[U(sigma_i, sigma_j)]` over an ambient set,
/// with the inf-player's time first.
pub fn payoff_matrix(
    u: &BiPayoff,
    space: &FilteredSpace,
    ambient: &StoppingTimeSet,
) -> Result<Vec<Vec<Rational>>, Error> {
    ambient
        .iter()
        .map(|rho| {
            ambient
                .iter()
                .map(|tau| expectation(&u.realized(rho.times(), tau.times()), space))
                .collect()
        })
        .collect()
}

/// Matrix of order ranks, so that sweeps compare small integers. Exact,
/// since the sweeps only take minima and maxima.
struct Ranked {
    levels: Vec<Rational>,
    ranks: Vec<Vec<u32>>,
}

impl Ranked {
    fn new(matrix: &[Vec<Rational>]) -> Self {
        let levels: Vec<Rational> = matrix
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ranks = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| levels.binary_search(x).expect("level present") as u32)
                    .collect()
            })
            .collect();
        Self { levels, ranks }
    }

    fn value(&self, rank: u32) -> Rational {
        self.levels[rank as usize].clone()
    }
}

fn enumerate_ambient(space: &FilteredSpace, caps: &Caps) -> Result<StoppingTimeSet, Error> {
    enumerate_stopping_times_capped(space, 0, caps.stopping)
}

/// `(inf_rho sup_tau, sup_tau inf_rho)` of `E[U(rho, tau)]` over stopping times.
pub fn value_naive(u: &BiPayoff, space: &FilteredSpace, caps: &Caps) -> Result<(Rational, Rational), Error> {
    let ambient = enumerate_ambient(space, caps)?;
    let matrix = payoff_matrix(u, space, &ambient)?;
    Ok(naive_from_matrix(&matrix))
}

fn naive_from_matrix(matrix: &[Vec<Rational>]) -> (Rational, Rational) {
    let n = matrix.len();
    let a_bar = (0..n)
        .map(|i| (0..n).map(|j| &matrix[i][j]).max().expect("nonempty"))
        .min()
        .expect("nonempty")
        .clone();
    let a_under = (0..n)
        .map(|j| (0..n).map(|i| &matrix[i][j]).min().expect("nonempty"))
        .max()
        .expect("nonempty")
        .clone();
    (a_bar, a_under)
}

/// Result of one sweep over all strategies of a kind.
struct Sweep {
    count: u64,
    /// inf over maps `m` of `max_j M[m(j)][j]`.
    inf_outer: u32,
    /// sup over maps `m` of `min_i M[i][m(i)]`.
    sup_outer: u32,
    /// extremum of the payoff against the constructed reply, if requested.
    reply: Option<u32>,
}

enum Reply<'a> {
    None,
    /// For Type II inf-strategies: `tau*(rho)` indexed by `rho(tau_d)`.
    TauStar {
        tau_d: usize,
        by_response: &'a [usize],
    },
    /// For Type I sup-strategies: `rho**(tau)` indexed by `tau(rho_d)`.
    RhoStarStar {
        rho_d: usize,
        by_response: &'a [usize],
    },
}

fn sweep(ambient: &StoppingTimeSet, kind: Kind, cap: u64, ranked: &Ranked, reply: Reply<'_>) -> Result<Sweep, Error> {
    let mut it = enumerate_strategies_capped(ambient, kind, cap)?;
    let n = ambient.len();
    let r = &ranked.ranks;
    let mut out = Sweep {
        count: 0,
        inf_outer: u32::MAX,
        sup_outer: 0,
        reply: None,
    };
    while let Some(m) = it.next_indices() {
        out.count += 1;
        let upper = (0..n).map(|j| r[m[j]][j]).max().expect("nonempty");
        let lower = (0..n).map(|i| r[i][m[i]]).min().expect("nonempty");
        out.inf_outer = out.inf_outer.min(upper);
        out.sup_outer = out.sup_outer.max(lower);
        match reply {
            Reply::None => {}
            Reply::TauStar { tau_d, by_response } => {
                let tau = by_response[m[tau_d]];
                let x = r[m[tau]][tau];
                out.reply = Some(out.reply.map_or(x, |y| y.min(x)));
            }
            Reply::RhoStarStar { rho_d, by_response } => {
                let rho = by_response[m[rho_d]];
                let x = r[rho][m[rho]];
                out.reply = Some(out.reply.map_or(x, |y| y.max(x)));
            }
        }
    }
    Ok(out)
}

/// Outer player picks a strategy of `outer_kind`, inner player a stopping time.
pub fn value_strategic(
    u: &BiPayoff,
    space: &FilteredSpace,
    outer_kind: Kind,
    outer_player: OuterPlayer,
    caps: &Caps,
) -> Result<Rational, Error> {
    let ambient = enumerate_ambient(space, caps)?;
    let ranked = Ranked::new(&payoff_matrix(u, space, &ambient)?);
    let s = sweep(&ambient, outer_kind, caps.strategies, &ranked, Reply::None)?;
    Ok(match outer_player {
        OuterPlayer::Inf => ranked.value(s.inf_outer),
        OuterPlayer::Sup => ranked.value(s.sup_outer),
    })
}

/// True iff the present values satisfy
/// `a_under <= b_under = v_under <= c_under`, `c_bar = v_bar <= b_bar <= a_bar`
/// and `v_bar = v_under = solver_value`.
pub fn check_ordering_chain(report: &GameValueReport) -> bool {
    ordering_failures(report, Comparison::Exact).is_empty()
}

fn ordering_failures(r: &GameValueReport, cmp: Comparison) -> Vec<String> {
    let mut out = Vec::new();
    let chains: [&[(&str, &Option<Rational>)]; 2] = [
        &[
            ("a_under", &r.a_under),
            ("b_under", &r.b_under),
            ("v_under", &r.v_under),
            ("c_under", &r.c_under),
        ],
        &[
            ("c_bar", &r.c_bar),
            ("v_bar", &r.v_bar),
            ("b_bar", &r.b_bar),
            ("a_bar", &r.a_bar),
        ],
    ];
    for chain in chains {
        let present: Vec<_> = chain.iter().filter_map(|(n, v)| v.as_ref().map(|v| (*n, v))).collect();
        for pair in present.windows(2) {
            if !cmp.le(pair[0].1, pair[1].1) {
                out.push(format!(
                    "ordering: {} = {} > {} = {}",
                    pair[0].0, pair[0].1, pair[1].0, pair[1].1
                ));
            }
        }
    }
    let solver = Some(r.solver_value.clone());
    let equalities = [
        ("b_under", &r.b_under, "v_under", &r.v_under),
        ("c_bar", &r.c_bar, "v_bar", &r.v_bar),
        ("v_bar", &r.v_bar, "v_under", &r.v_under),
        ("v_bar", &r.v_bar, "solver_value", &solver),
        ("v_under", &r.v_under, "solver_value", &solver),
    ];
    for (na, a, nb, b) in equalities {
        if let (Some(a), Some(b)) = (a, b) {
            if !cmp.eq(a, b) {
                out.push(format!("equality: {na} = {a} != {nb} = {b}"));
            }
        }
    }
    out
}

/// Outcome of [`verify_theorem`]: the report plus failed assertions (expected empty).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub report: GameValueReport,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Index of each constructed reply inside the ambient set.
fn index_all(ambient: &StoppingTimeSet, times: impl Iterator<Item = StoppingTime>) -> Result<Vec<usize>, Error> {
    times.map(|s| ambient.index_of(&s).ok_or(Error::NotInAmbient)).collect()
}

fn snell_certificate_failures(sol: &GameSolution, u: &BiPayoff, space: &FilteredSpace) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    let horizon = space.horizon();
    for t in 0..=horizon {
        let fixed = vec![t; space.num_outcomes()];
        let lower = cond_exp(&u.realized(sol.rho_u[t].times(), &fixed), space, t)?;
        if &lower != sol.v1.at(t) {
            out.push(format!("E_t[U(rho_u[{t}], {t})] != v1[{t}]"));
        }
        if t < horizon {
            let upper = cond_exp(&u.realized(&fixed, sol.tau_u[t].times()), space, t)?;
            if upper != sol.continuation[t] {
                out.push(format!("E_t[U({t}, tau_u[{t}])] != sup envelope at {t}"));
            }
        }
    }
    Ok(out)
}

/// Solves, then checks every identity and inequality that can be decided
/// within `caps`. Nothing is thrown for failed checks; they are listed.
pub fn verify_theorem(
    u: &BiPayoff,
    space: &FilteredSpace,
    caps: &Caps,
    cmp: Comparison,
) -> Result<Verification, Error> {
    let sol = solve(u, space)?;
    let mut report = GameValueReport::empty(sol.value.clone());
    report.approximate = matches!(cmp, Comparison::Tolerance(_));
    let mut failures = solution_invariant_failures(&sol, u, space);
    failures.extend(snell_certificate_failures(&sol, u, space)?);
    let mut warnings = Vec::new();

    let all = [
        "a_bar", "a_under", "b_bar", "b_under", "c_bar", "c_under", "v_bar", "v_under",
    ];
    let ambient = match enumerate_ambient(space, caps) {
        Ok(a) => a,
        Err(e @ Error::EnumerationOverflow { .. }) => {
            let reason = e.to_string();
            report.skip(&all, &reason);
            report.skip(
                &[
                    "best_response_upper",
                    "best_response_lower",
                    "reply_upper",
                    "reply_lower",
                ],
                &reason,
            );
            warnings.push(reason);
            return Ok(Verification {
                report,
                failures,
                warnings,
            });
        }
        Err(e) => return Err(e),
    };
    report.enumeration_sizes.stopping_times = Some(ambient.len() as u64);
    let value = &sol.value;

    // Saddle inequalities of (rho_d, tau_d) in the reduced Dynkin game.
    for tau in ambient.iter() {
        let x = expectation(&dynkin_payoff(&sol, &sol.rho_d, tau), space)?;
        if !cmp.le(&x, value) {
            failures.push(format!("saddle: tau={tau} beats rho_d with {x} > {value}"));
        }
    }
    for rho in ambient.iter() {
        let x = expectation(&dynkin_payoff(&sol, rho, &sol.tau_d), space)?;
        if !cmp.le(value, &x) {
            failures.push(format!("saddle: rho={rho} beats tau_d with {x} < {value}"));
        }
    }

    // Best responses against the constructed strategies.
    let rho_star = build_rho_star(&sol, &ambient);
    let tau_ss = build_tau_starstar(&sol, &ambient);
    match (&rho_star, &tau_ss) {
        (Ok(rho_star), Ok(tau_ss)) => {
            let upper = ambient
                .iter()
                .zip(rho_star.table())
                .map(|(tau, rho)| expectation(&u.realized(rho.times(), tau.times()), space))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .max()
                .expect("nonempty");
            let lower = ambient
                .iter()
                .zip(tau_ss.table())
                .map(|(rho, tau)| expectation(&u.realized(rho.times(), tau.times()), space))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .min()
                .expect("nonempty");
            if !cmp.eq(&upper, value) {
                failures.push(format!(
                    "best response: max_tau E[U(rho*(tau),tau)] = {upper} != {value}"
                ));
            }
            if !cmp.eq(&lower, value) {
                failures.push(format!(
                    "best response: min_rho E[U(rho,tau**(rho))] = {lower} != {value}"
                ));
            }
            report.best_response_upper = Some(upper);
            report.best_response_lower = Some(lower);
            match corollary_identities(&sol, u, space, &ambient) {
                Ok(true) => {}
                Ok(false) => failures.push("corollary identities fail".into()),
                Err(e) => failures.push(format!("corollary identities: {e}")),
            }
        }
        _ => {
            for r in [&rho_star, &tau_ss] {
                if let Err(e) = r {
                    failures.push(format!("constructed strategy: {e}"));
                }
            }
        }
    }

    if report.approximate {
        report.skip(&all, "float mode: exact enumeration disabled");
        report.skip(
            &["reply_upper", "reply_lower"],
            "float mode: exact enumeration disabled",
        );
        failures.extend(ordering_failures(&report, cmp));
        return Ok(Verification {
            report,
            failures,
            warnings,
        });
    }

    let matrix = payoff_matrix(u, space, &ambient)?;
    let (a_bar, a_under) = naive_from_matrix(&matrix);
    report.a_bar = Some(a_bar);
    report.a_under = Some(a_under);
    let ranked = Ranked::new(&matrix);

    let tau_star_by = index_all(
        &ambient,
        ambient.iter().map(|sigma| {
            let inner = crate::stopping::compose_unchecked(&sol.tau_u, sigma);
            StoppingTime::new_unchecked(
                (0..sigma.len())
                    .map(|w| {
                        if sol.tau_d.at(w) <= sigma.at(w) {
                            sol.tau_d.at(w)
                        } else {
                            inner.at(w)
                        }
                    })
                    .collect(),
            )
        }),
    );
    let rho_ss_by = index_all(
        &ambient,
        ambient.iter().map(|sigma| {
            let inner = crate::stopping::compose_unchecked(&sol.rho_u, sigma);
            StoppingTime::new_unchecked(
                (0..sigma.len())
                    .map(|w| {
                        if sol.rho_d.at(w) < sigma.at(w) {
                            sol.rho_d.at(w)
                        } else {
                            inner.at(w)
                        }
                    })
                    .collect(),
            )
        }),
    );
    let (tau_star_by, rho_ss_by) = match (tau_star_by, rho_ss_by) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            failures.push("constructed replies are not members of the enumerated set".into());
            return Ok(Verification {
                report,
                failures,
                warnings,
            });
        }
    };
    let tau_d = ambient.index_of(&sol.tau_d);
    let rho_d = ambient.index_of(&sol.rho_d);
    let (Some(tau_d), Some(rho_d)) = (tau_d, rho_d) else {
        failures.push("hitting times are not members of the enumerated set".into());
        return Ok(Verification {
            report,
            failures,
            warnings,
        });
    };

    let type_i = sweep(
        &ambient,
        Kind::TypeI,
        caps.strategies,
        &ranked,
        Reply::RhoStarStar {
            rho_d,
            by_response: &rho_ss_by,
        },
    );
    let type_ii = sweep(
        &ambient,
        Kind::TypeII,
        caps.strategies,
        &ranked,
        Reply::TauStar {
            tau_d,
            by_response: &tau_star_by,
        },
    );
    match (type_i, type_ii) {
        (Ok(one), Ok(two)) => {
            report.enumeration_sizes.type_i = Some(one.count);
            report.enumeration_sizes.type_ii = Some(two.count);
            report.b_bar = Some(ranked.value(one.inf_outer));
            report.b_under = Some(ranked.value(one.sup_outer));
            report.c_bar = Some(ranked.value(two.inf_outer));
            report.c_under = Some(ranked.value(two.sup_outer));
            report.v_bar = report.c_bar.clone();
            report.v_under = report.b_under.clone();
            report.reply_lower = one.reply.map(|r| ranked.value(r));
            report.reply_upper = two.reply.map(|r| ranked.value(r));
            report.b_bar_equals_c_under = Some(report.b_bar == report.c_under);
            report.b_under_equals_c_bar = Some(report.b_under == report.c_bar);
            for (name, x) in [
                ("reply_upper", &report.reply_upper),
                ("reply_lower", &report.reply_lower),
            ] {
                if let Some(x) = x {
                    if !cmp.eq(x, value) {
                        failures.push(format!("{name} = {x} != {value}"));
                    }
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            let reason = e.to_string();
            report.skip(
                &[
                    "b_bar",
                    "b_under",
                    "c_bar",
                    "c_under",
                    "v_bar",
                    "v_under",
                    "reply_upper",
                    "reply_lower",
                ],
                &reason,
            );
            warnings.push(reason);
        }
    }
    failures.extend(ordering_failures(&report, cmp));
    Ok(Verification {
        report,
        failures,
        warnings,
    })
}

/// Expected payoff `E[U(rho*(tau), tau)]` for a single opponent `tau`.
pub fn payoff_against_rho_star(
    sol: &GameSolution,
    u: &BiPayoff,
    space: &FilteredSpace,
    tau: &StoppingTime,
) -> Result<Rational, Error> {
    let rho = rho_star_response(sol, tau);
    expectation(&u.realized(rho.times(), tau.times()), space)
}

/// Expected payoff `E[U(rho, tau**(rho))]` for a single opponent `rho`.
pub fn payoff_against_tau_starstar(
    sol: &GameSolution,
    u: &BiPayoff,
    space: &FilteredSpace,
    rho: &StoppingTime,
) -> Result<Rational, Error> {
    let tau = tau_starstar_response(sol, rho);
    expectation(&u.realized(rho.times(), tau.times()), space)
}

impl fmt::Display for GameValueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Rational>| v.as_ref().map_or_else(|| "skipped".to_string(), |x| x.to_string());
        writeln!(f, "{:<22} {}", "a_bar", show(&self.a_bar))?;
        writeln!(f, "{:<22} {}", "a_under", show(&self.a_under))?;
        writeln!(f, "{:<22} {}", "b_bar", show(&self.b_bar))?;
        writeln!(f, "{:<22} {}", "b_under", show(&self.b_under))?;
        writeln!(f, "{:<22} {}", "c_bar", show(&self.c_bar))?;
        writeln!(f, "{:<22} {}", "c_under", show(&self.c_under))?;
        writeln!(f, "{:<22} {}", "v_bar", show(&self.v_bar))?;
        writeln!(f, "{:<22} {}", "v_under", show(&self.v_under))?;
        writeln!(f, "{:<22} {}", "solver_value", self.solver_value)?;
        let size = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        writeln!(
            f,
            "sizes: |T| = {}, |T^i| = {}, |T^ii| = {}",
            size(self.enumeration_sizes.stopping_times),
            size(self.enumeration_sizes.type_i),
            size(self.enumeration_sizes.type_ii)
        )?;
        if self.approximate {
            writeln!(f, "APPROXIMATE: float-mode payoffs, tolerance comparisons")?;
        }
        for s in &self.skipped {
            writeln!(f, "skipped {}: {}", s.value, s.reason)?;
        }
        Ok(())
    }
}
