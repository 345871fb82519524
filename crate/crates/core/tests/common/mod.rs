#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stopgame::payoff::{gen_dynkin, BiPayoff};
use stopgame::random::{random_dynkin_pair, random_payoff, random_space};
use stopgame::space::{cond_exp, AdaptedProcess, FilteredSpace};
use stopgame::stopping::count_stopping_times;
use stopgame::Rational;

pub fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

pub fn scenario_path(name: &str) -> PathBuf {
    scenario_dir().join(name)
}

pub fn bundled_scenarios() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .expect("scenario dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    out
}

/// `E[V_0]` for the classical Dynkin recursion `V_T = g_T`,
/// `V_t = max(g_t, min(f_t, E_t V_{t+1}))`.
pub fn classical_dynkin_value(f: &AdaptedProcess, g: &AdaptedProcess, space: &FilteredSpace) -> Rational {
    let horizon = space.horizon();
    let mut v = g.at(horizon).clone();
    for t in (0..horizon).rev() {
        let cont = cond_exp(&v, space, t).unwrap();
        v = stopgame::RandomVariable::new(
            (0..space.num_outcomes())
                .map(|w| {
                    let inner = f.get(t, w).clone().min(cont[w].clone());
                    g.get(t, w).clone().max(inner)
                })
                .collect(),
        );
    }
    stopgame::space::expectation(&v, space).unwrap()
}

/// A random tree space with horizon in `1..=max_horizon` and at most
/// `max_outcomes` outcomes, redrawn until it has at most `cap` stopping times.
pub fn bounded_space(rng: &mut ChaCha8Rng, max_horizon: usize, max_outcomes: usize, cap: u128) -> FilteredSpace {
    loop {
        let horizon = rng.gen_range(1..=max_horizon);
        let outcomes = rng.gen_range(1..=max_outcomes);
        let space = random_space(rng, horizon, outcomes);
        if count_stopping_times(&space, 0).unwrap() <= cap {
            return space;
        }
    }
}

pub struct DynkinCase {
    pub space: FilteredSpace,
    pub f: AdaptedProcess,
    pub g: AdaptedProcess,
    pub u: BiPayoff,
}

pub fn dynkin_case(seed: u64, max_horizon: usize, max_outcomes: usize, cap: u128) -> DynkinCase {
    let mut rng = stopgame::random::rng(seed);
    let space = bounded_space(&mut rng, max_horizon, max_outcomes, cap);
    let (f, g) = random_dynkin_pair(&mut rng, &space, 4);
    let u = gen_dynkin(&f, &g, &space).unwrap();
    DynkinCase { space, f, g, u }
}

pub fn general_case(seed: u64, max_horizon: usize, max_outcomes: usize, cap: u128) -> (FilteredSpace, BiPayoff) {
    let mut rng = stopgame::random::rng(seed);
    let space = bounded_space(&mut rng, max_horizon, max_outcomes, cap);
    let u = random_payoff(&mut rng, &space, 5);
    (space, u)
}

pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stopgame").chain(args.iter().copied());
    let code = stopgame::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}
