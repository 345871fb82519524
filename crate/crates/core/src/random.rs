//! Seeded random scenarios for verification sweeps.
//!
//! Spaces are trees whose atoms split into at most two children per step.
//! Payoffs are random integers averaged over the atoms of the partition at
//! `max(s, t)`, which makes them measurable by construction.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::payoff::{BiPayoff, PayoffSpec};
use crate::rational::Rational;
use crate::scenario::{describe, ScenarioFile};
use crate::space::{cond_exp, AdaptedProcess, FilteredSpace, Partition, RandomVariable};

/// `T=..,outcomes=..,seed=..` as accepted by `--random`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub horizon: usize,
    pub outcomes: usize,
    pub seed: u64,
}

impl FromStr for RandomSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut spec = RandomSpec {
            horizon: 2,
            outcomes: 4,
            seed: 0,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("random option {part:?} is not key=value")))?;
            let parsed: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("random option {k} has non-integer value {v:?}")))?;
            match k.trim() {
                "T" | "horizon" => spec.horizon = parsed as usize,
                "outcomes" => spec.outcomes = parsed as usize,
                "seed" => spec.seed = parsed,
                other => return Err(Error::Precondition(format!("unknown random option {other:?}"))),
            }
        }
        if spec.outcomes == 0 {
            return Err(Error::Precondition("outcomes must be positive".into()));
        }
        Ok(spec)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tree space with `outcomes` outcomes and binary splitting.
pub fn random_space(rng: &mut impl Rng, horizon: usize, outcomes: usize) -> FilteredSpace {
    let mut order: Vec<usize> = (0..outcomes).collect();
    order.shuffle(rng);
    let split = |rng: &mut dyn rand::RngCore, atom: &[usize], p: f64| -> Vec<Vec<usize>> {
        if atom.len() >= 2 && rng.gen_bool(p) {
            let cut = rng.gen_range(1..atom.len());
            vec![atom[..cut].to_vec(), atom[cut..].to_vec()]
        } else {
            vec![atom.to_vec()]
        }
    };
    let mut filtration: Vec<Partition> = vec![split(rng, &order, 0.2)];
    for _ in 1..=horizon {
        let prev = filtration.last().expect("nonempty");
        let next = prev.iter().flat_map(|atom| split(rng, atom, 0.7)).collect();
        filtration.push(next);
    }
    for partition in &mut filtration {
        for atom in partition.iter_mut() {
            atom.sort_unstable();
        }
        partition.sort();
    }
    let weights: Vec<i64> = (0..outcomes).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let probabilities = weights
        .into_iter()
        .map(|w| Rational::new(w, total).expect("positive total"))
        .collect();
    FilteredSpace::from_probabilities(horizon, probabilities, filtration).expect("generated space is valid")
}

fn random_integers(rng: &mut impl Rng, n: usize, range: i64) -> RandomVariable {
    RandomVariable::new(
        (0..n)
            .map(|_| Rational::from_integer(rng.gen_range(-range..=range)))
            .collect(),
    )
}

/// Random payoff, made measurable by conditioning each slice at `max(s, t)`.
pub fn random_payoff(rng: &mut impl Rng, space: &FilteredSpace, range: i64) -> BiPayoff {
    let horizon = space.horizon();
    let n = space.num_outcomes();
    let mut nested = vec![vec![Vec::new(); horizon + 1]; horizon + 1];
    for (s, row) in nested.iter_mut().enumerate() {
        for (t, cell) in row.iter_mut().enumerate() {
            let raw = random_integers(rng, n, range);
            *cell = cond_exp(&raw, space, s.max(t)).expect("time in range").into_values();
        }
    }
    BiPayoff::from_nested(&nested).expect("rectangular table")
}

/// Random adapted process with entries averaged over the atoms at each time.
pub fn random_adapted(rng: &mut impl Rng, space: &FilteredSpace, range: i64) -> AdaptedProcess {
    let values = (0..=space.horizon())
        .map(|t| cond_exp(&random_integers(rng, space.num_outcomes(), range), space, t).expect("time in range"))
        .collect();
    AdaptedProcess::new(values, space).expect("conditioned values are adapted")
}

/// Adapted pair `(f, g)` with `f >= g`.
pub fn random_dynkin_pair(rng: &mut impl Rng, space: &FilteredSpace, range: i64) -> (AdaptedProcess, AdaptedProcess) {
    let g = random_adapted(rng, space, range);
    let gap = random_adapted(rng, space, range);
    let f = AdaptedProcess::new(
        g.slices()
            .iter()
            .zip(gap.slices())
            .map(|(x, d)| RandomVariable::new(x.values().iter().zip(d.values()).map(|(a, b)| a + b.abs()).collect()))
            .collect(),
        space,
    )
    .expect("sum of adapted processes");
    (f, g)
}

/// The scenario behind `--random`.
pub fn random_scenario(spec: &RandomSpec) -> ScenarioFile {
    let mut r = rng(spec.seed);
    let space = random_space(&mut r, spec.horizon, spec.outcomes);
    let payoff = random_payoff(&mut r, &space, 5);
    describe(
        &format!("random_T{}_n{}_seed{}", spec.horizon, spec.outcomes, spec.seed),
        &space,
        PayoffSpec::Explicit {
            table: payoff.to_nested(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::validate_payoff;
    use crate::space::validate_space;

    #[test]
    fn spec_parsing() {
        let spec: RandomSpec = "T=3,outcomes=6,seed=42".parse().unwrap();
        assert_eq!(
            spec,
            RandomSpec {
                horizon: 3,
                outcomes: 6,
                seed: 42
            }
        );
        assert!("T=x".parse::<RandomSpec>().is_err());
        assert!("depth=2".parse::<RandomSpec>().is_err());
        assert!("outcomes=0".parse::<RandomSpec>().is_err());
    }

    #[test]
    fn generated_scenarios_are_valid_and_seeded() {
        for seed in 0..20 {
            let spec = RandomSpec {
                horizon: 3,
                outcomes: 6,
                seed,
            };
            let file = random_scenario(&spec);
            let scenario = file.build(None).unwrap();
            assert!(validate_space(&scenario.space).is_empty());
            assert!(validate_payoff(&scenario.payoff, &scenario.space).unwrap().is_empty());
            assert_eq!(random_scenario(&spec), file);
        }
    }

    #[test]
    fn dynkin_pairs_are_ordered() {
        let mut r = rng(7);
        let space = random_space(&mut r, 3, 5);
        let (f, g) = random_dynkin_pair(&mut r, &space, 4);
        for t in 0..=3 {
            for w in 0..5 {
                assert!(f.get(t, w) >= g.get(t, w));
            }
        }
    }
}
