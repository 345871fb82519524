//! Backward-induction solver.
//!
//! The stopping game is reduced to a Dynkin game whose payoffs are the
//! lower process `v1` (the inf-player's best reply once the sup-player has
//! stopped) and the upper process `v2` (the sup-player's best reply once
//! the inf-player has stopped first, floored by `v1`). The Dynkin value is
//! obtained by the usual recursion, and the optimal strategies are built
//! from its hitting times together with the two optimizer families.

use crate::error::Error;
use crate::payoff::{validate_payoff, BiPayoff};
use crate::rational::Rational;
use crate::space::{cond_exp, expectation, validate_space, AdaptedProcess, FilteredSpace, RandomVariable};
use crate::stopping::{compose_unchecked, Kind, StoppingStrategy, StoppingTime, StoppingTimeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerProcess {
    pub v1: AdaptedProcess,
    /// `rho_u[t]` attains the infimum defining `v1[t]`; values `>= t`.
    pub rho_u: Vec<StoppingTime>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperProcess {
    pub v2: AdaptedProcess,
    /// `tau_u[t]` attains the supremum over stopping times `>= t + 1`.
    pub tau_u: Vec<StoppingTime>,
    /// `continuation[t]` is that supremum, for `t < T`.
    pub continuation: Vec<RandomVariable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinValue {
    pub v: AdaptedProcess,
    pub rho_d: StoppingTime,
    pub tau_d: StoppingTime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    pub v1: AdaptedProcess,
    pub v2: AdaptedProcess,
    pub v: AdaptedProcess,
    pub rho_d: StoppingTime,
    pub tau_d: StoppingTime,
    pub rho_u: Vec<StoppingTime>,
    pub tau_u: Vec<StoppingTime>,
    pub continuation: Vec<RandomVariable>,
    pub value: Rational,
}

impl GameSolution {
    pub fn horizon(&self) -> usize {
        self.v.horizon()
    }
}

fn check_dims(u: &BiPayoff, space: &FilteredSpace) -> Result<(), Error> {
    if u.horizon() != space.horizon() || u.num_outcomes() != space.num_outcomes() {
        return Err(Error::Dimension("payoff does not match the space".into()));
    }
    Ok(())
}

fn slice(u: &BiPayoff, s: usize, t: usize) -> RandomVariable {
    RandomVariable::new(u.slice(s, t).to_vec())
}

/// First index `s` in `from..=T` with `envelope[s](w) == payoff(s)(w)`.
fn first_hit(
    envelope: &[RandomVariable],
    payoff: impl Fn(usize) -> RandomVariable,
    from: usize,
    horizon: usize,
    n: usize,
) -> StoppingTime {
    let payoffs: Vec<RandomVariable> = (from..=horizon).map(&payoff).collect();
    let times = (0..n)
        .map(|w| {
            (from..=horizon)
                .find(|&s| envelope[s][w] == payoffs[s - from][w])
                .unwrap_or(horizon)
        })
        .collect();
    StoppingTime::new_unchecked(times)
}

/// Inf-Snell envelope of `s -> U(s, t)` on `s >= t`, for every `t`.
pub fn lower_process(u: &BiPayoff, space: &FilteredSpace) -> Result<LowerProcess, Error> {
    check_dims(u, space)?;
    let horizon = space.horizon();
    let n = space.num_outcomes();
    let mut v1 = Vec::with_capacity(horizon + 1);
    let mut rho_u = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        let mut envelope = vec![RandomVariable::constant(n, Rational::zero()); horizon + 1];
        envelope[horizon] = slice(u, horizon, t);
        for s in (t..horizon).rev() {
            let cont = cond_exp(&envelope[s + 1], space, s)?;
            let stop = u.slice(s, t);
            envelope[s] = RandomVariable::new((0..n).map(|w| stop[w].clone().min(cont[w].clone())).collect());
        }
        rho_u.push(first_hit(&envelope, |s| slice(u, s, t), t, horizon, n));
        v1.push(envelope.swap_remove(t));
    }
    Ok(LowerProcess {
        v1: AdaptedProcess::new_unchecked(v1),
        rho_u,
    })
}

/// Sup-Snell envelope of `s -> U(t, s)` on `s >= t + 1`, floored by `v1`.
pub fn upper_process(u: &BiPayoff, space: &FilteredSpace, v1: &AdaptedProcess) -> Result<UpperProcess, Error> {
    check_dims(u, space)?;
    let horizon = space.horizon();
    let n = space.num_outcomes();
    if v1.horizon() != horizon {
        return Err(Error::Dimension("v1 does not match the space".into()));
    }
    let mut v2 = Vec::with_capacity(horizon + 1);
    let mut tau_u = Vec::with_capacity(horizon + 1);
    let mut continuation = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let mut envelope = vec![RandomVariable::constant(n, Rational::zero()); horizon + 1];
        envelope[horizon] = slice(u, t, horizon);
        for s in (t + 1..horizon).rev() {
            let cont = cond_exp(&envelope[s + 1], space, s)?;
            let stop = u.slice(t, s);
            envelope[s] = RandomVariable::new((0..n).map(|w| stop[w].clone().max(cont[w].clone())).collect());
        }
        let sup = cond_exp(&envelope[t + 1], space, t)?;
        let floor = v1.at(t);
        v2.push(RandomVariable::new(
            (0..n).map(|w| sup[w].clone().max(floor[w].clone())).collect(),
        ));
        tau_u.push(first_hit(&envelope, |s| slice(u, t, s), t + 1, horizon, n));
        continuation.push(sup);
    }
    v2.push(slice(u, horizon, horizon));
    tau_u.push(StoppingTime::new_unchecked(vec![horizon; n]));
    Ok(UpperProcess {
        v2: AdaptedProcess::new_unchecked(v2),
        tau_u,
        continuation,
    })
}

/// Value process of the Dynkin game with payoff `v1` to the sup-player when
/// it stops no later than the inf-player, and `v2` otherwise.
pub fn dynkin_value(v1: &AdaptedProcess, v2: &AdaptedProcess, space: &FilteredSpace) -> Result<DynkinValue, Error> {
    let horizon = space.horizon();
    let n = space.num_outcomes();
    if v1.horizon() != horizon || v2.horizon() != horizon {
        return Err(Error::Dimension("processes do not match the space".into()));
    }
    for t in 0..=horizon {
        for w in 0..n {
            if v1.get(t, w) > v2.get(t, w) {
                return Err(Error::Precondition(format!("v1 > v2 at (t={t}, w={w})")));
            }
        }
    }
    if v1.at(horizon) != v2.at(horizon) {
        return Err(Error::Precondition("v1 and v2 differ at the horizon".into()));
    }
    let mut v = vec![RandomVariable::constant(n, Rational::zero()); horizon + 1];
    v[horizon] = v1.at(horizon).clone();
    for t in (0..horizon).rev() {
        let cont = cond_exp(&v[t + 1], space, t)?;
        v[t] = RandomVariable::new(
            (0..n)
                .map(|w| {
                    let inner = v1.get(t, w).clone().max(cont[w].clone());
                    v2.get(t, w).clone().min(inner)
                })
                .collect(),
        );
    }
    let rho_d = first_hit(&v, |s| v2.at(s).clone(), 0, horizon, n);
    let tau_d = first_hit(&v, |s| v1.at(s).clone(), 0, horizon, n);
    Ok(DynkinValue {
        v: AdaptedProcess::new_unchecked(v),
        rho_d,
        tau_d,
    })
}

/// Solves the game on a validated space and payoff.
pub fn solve(u: &BiPayoff, space: &FilteredSpace) -> Result<GameSolution, Error> {
    let mut violations = validate_space(space);
    if violations.is_empty() {
        violations = validate_payoff(u, space)?;
    }
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let LowerProcess { v1, rho_u } = lower_process(u, space)?;
    let UpperProcess {
        v2,
        tau_u,
        continuation,
    } = upper_process(u, space, &v1)?;
    let DynkinValue { v, rho_d, tau_d } = dynkin_value(&v1, &v2, space)?;
    let value = expectation(v.at(0), space)?;
    Ok(GameSolution {
        v1,
        v2,
        v,
        rho_d,
        tau_d,
        rho_u,
        tau_u,
        continuation,
        value,
    })
}

/// `rho*(tau) = rho_d` on `{tau > rho_d}`, `rho_u(tau)` elsewhere.
pub fn rho_star_response(sol: &GameSolution, tau: &StoppingTime) -> StoppingTime {
    let inner = compose_unchecked(&sol.rho_u, tau);
    mix(tau, |w| tau.at(w) > sol.rho_d.at(w), &sol.rho_d, &inner)
}

/// `tau**(rho) = tau_d` on `{rho >= tau_d}`, `tau_u(rho)` elsewhere.
pub fn tau_starstar_response(sol: &GameSolution, rho: &StoppingTime) -> StoppingTime {
    let inner = compose_unchecked(&sol.tau_u, rho);
    mix(rho, |w| rho.at(w) >= sol.tau_d.at(w), &sol.tau_d, &inner)
}

fn mix(
    shape: &StoppingTime,
    pick_first: impl Fn(usize) -> bool,
    first: &StoppingTime,
    second: &StoppingTime,
) -> StoppingTime {
    StoppingTime::new_unchecked(
        (0..shape.len())
            .map(|w| if pick_first(w) { first.at(w) } else { second.at(w) })
            .collect(),
    )
}

/// Materializes the optimal Type II strategy of the inf-player over `ambient`.
pub fn build_rho_star(sol: &GameSolution, ambient: &StoppingTimeSet) -> Result<StoppingStrategy, Error> {
    let table = ambient.iter().map(|tau| rho_star_response(sol, tau)).collect();
    StoppingStrategy::unchecked(table).certify(Kind::TypeII, ambient)
}

/// Sup-player's reply to an inf-player strategy `rho`: `tau_d` where
/// `tau_d <= rho(tau_d)`, and `tau_u(rho(tau_d))` elsewhere.
pub fn build_tau_star(
    sol: &GameSolution,
    rho: &StoppingStrategy,
    ambient: &StoppingTimeSet,
) -> Result<StoppingTime, Error> {
    let sigma = rho.apply(&sol.tau_d, ambient)?;
    let inner = compose_unchecked(&sol.tau_u, sigma);
    Ok(mix(sigma, |w| sol.tau_d.at(w) <= sigma.at(w), &sol.tau_d, &inner))
}

/// Materializes the optimal Type I strategy of the sup-player over `ambient`.
pub fn build_tau_starstar(sol: &GameSolution, ambient: &StoppingTimeSet) -> Result<StoppingStrategy, Error> {
    let table = ambient.iter().map(|rho| tau_starstar_response(sol, rho)).collect();
    StoppingStrategy::unchecked(table).certify(Kind::TypeI, ambient)
}

/// Inf-player's reply to a sup-player strategy `tau`: `rho_d` where
/// `rho_d < tau(rho_d)`, and `rho_u(tau(rho_d))` elsewhere.
pub fn build_rho_starstar(
    sol: &GameSolution,
    tau: &StoppingStrategy,
    ambient: &StoppingTimeSet,
) -> Result<StoppingTime, Error> {
    let sigma = tau.apply(&sol.rho_d, ambient)?;
    let inner = compose_unchecked(&sol.rho_u, sigma);
    Ok(mix(sigma, |w| sol.rho_d.at(w) < sigma.at(w), &sol.rho_d, &inner))
}

/// Realized Dynkin payoff `v1_tau 1{tau <= rho} + v2_rho 1{tau > rho}`.
pub fn dynkin_payoff(sol: &GameSolution, rho: &StoppingTime, tau: &StoppingTime) -> RandomVariable {
    RandomVariable::new(
        (0..rho.len())
            .map(|w| {
                if tau.at(w) <= rho.at(w) {
                    sol.v1.get(tau.at(w), w).clone()
                } else {
                    sol.v2.get(rho.at(w), w).clone()
                }
            })
            .collect(),
    )
}

/// Checks the closed forms of `rho*(tau*(rho*))` and `tau*(rho*)` pointwise
/// and that their expected payoff equals the game value.
pub fn corollary_identities(
    sol: &GameSolution,
    u: &BiPayoff,
    space: &FilteredSpace,
    ambient: &StoppingTimeSet,
) -> Result<bool, Error> {
    let rho_star = build_rho_star(sol, ambient)?;
    let tau_star = build_tau_star(sol, &rho_star, ambient)?;
    let rho_at = rho_star.apply(&tau_star, ambient)?;
    let (rho_d, tau_d) = (&sol.rho_d, &sol.tau_d);
    for w in 0..space.num_outcomes() {
        let (expected_rho, expected_tau) = if tau_d.at(w) > rho_d.at(w) {
            (rho_d.at(w), sol.tau_u[rho_d.at(w)].at(w))
        } else {
            (sol.rho_u[tau_d.at(w)].at(w), tau_d.at(w))
        };
        if rho_at.at(w) != expected_rho || tau_star.at(w) != expected_tau {
            return Ok(false);
        }
    }
    let realized = u.realized(rho_at.times(), tau_star.times());
    Ok(expectation(&realized, space)? == sol.value)
}

/// Hitting-time and ordering invariants of a solution, as failure messages.
pub fn solution_invariant_failures(sol: &GameSolution, u: &BiPayoff, space: &FilteredSpace) -> Vec<String> {
    let mut out = Vec::new();
    let horizon = space.horizon();
    for t in 0..=horizon {
        for w in 0..space.num_outcomes() {
            if !(sol.v1.get(t, w) <= sol.v.get(t, w) && sol.v.get(t, w) <= sol.v2.get(t, w)) {
                out.push(format!("v1 <= v <= v2 fails at (t={t}, w={w})"));
            }
            if sol.rho_u[t].at(w) < t {
                out.push(format!("rho_u[{t}] < {t} at w={w}"));
            }
            let floor = if t < horizon { t + 1 } else { horizon };
            if sol.tau_u[t].at(w) < floor {
                out.push(format!("tau_u[{t}] < {floor} at w={w}"));
            }
        }
    }
    for w in 0..space.num_outcomes() {
        if sol.v1.get(horizon, w) != u.get(horizon, horizon, w) || sol.v2.get(horizon, w) != u.get(horizon, horizon, w)
        {
            out.push(format!("terminal values differ from U(T,T) at w={w}"));
        }
        let td = sol.tau_d.at(w);
        if sol.v.get(td, w) != sol.v1.get(td, w) {
            out.push(format!("v != v1 at tau_d for w={w}"));
        }
        let rd = sol.rho_d.at(w);
        if sol.v.get(rd, w) != sol.v2.get(rd, w) {
            out.push(format!("v != v2 at rho_d for w={w}"));
        }
    }
    let families = sol.rho_u.iter().chain(&sol.tau_u).chain([&sol.rho_d, &sol.tau_d]);
    for st in families {
        if !matches!(crate::stopping::is_stopping_time(st.times(), space), Ok(true)) {
            out.push(format!("{st} is not a stopping time"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{gen_distance, gen_mismatch};
    use crate::rational::q;
    use crate::stopping::{check_nonanticipativity, enumerate_stopping_times};

    fn zeros(horizon: usize) -> Vec<Rational> {
        vec![Rational::zero(); horizon + 1]
    }

    #[test]
    fn mismatch_one_step() {
        let space = FilteredSpace::deterministic(1);
        let u = gen_mismatch(&space);
        let sol = solve(&u, &space).unwrap();
        assert_eq!(sol.v1, AdaptedProcess::deterministic(&zeros(1), &space));
        assert_eq!(sol.v2, AdaptedProcess::deterministic(&[q(1, 1), q(0, 1)], &space));
        assert_eq!(sol.v, AdaptedProcess::deterministic(&zeros(1), &space));
        assert_eq!(sol.tau_u[0].at(0), 1);
        assert_eq!((sol.tau_d.at(0), sol.rho_d.at(0)), (0, 1));
        assert_eq!(sol.value, Rational::zero());

        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        let rho_star = build_rho_star(&sol, &ambient).unwrap();
        let table: Vec<usize> = rho_star.table().iter().map(|s| s.at(0)).collect();
        assert_eq!(table, vec![0, 1]);

        let tau_star = build_tau_star(&sol, &rho_star, &ambient).unwrap();
        assert_eq!(tau_star.at(0), 0);
        let constant_zero = StoppingStrategy::constant(ambient.get(0).clone(), &ambient);
        assert_eq!(build_tau_star(&sol, &constant_zero, &ambient).unwrap().at(0), 0);

        // tau_d = 0, so every rho satisfies rho >= tau_d and tau** stops at once.
        let tau_ss = build_tau_starstar(&sol, &ambient).unwrap();
        assert!(tau_ss.table().iter().all(|s| s.at(0) == 0));
        assert!(corollary_identities(&sol, &u, &space, &ambient).unwrap());
    }

    #[test]
    fn distance_game() {
        for horizon in 1..=5 {
            let space = FilteredSpace::deterministic(horizon);
            let u = gen_distance(&space);
            let sol = solve(&u, &space).unwrap();
            for t in 0..=horizon {
                assert!(sol.v1.get(t, 0).is_zero());
                assert_eq!(sol.rho_u[t].at(0), t);
                let expected = Rational::from_integer((horizon - t) as i64);
                if t < horizon {
                    assert_eq!(sol.v2.get(t, 0), &expected);
                    assert_eq!(sol.tau_u[t].at(0), horizon);
                } else {
                    assert!(sol.v2.get(t, 0).is_zero());
                }
                assert!(sol.v.get(t, 0).is_zero());
            }
            assert_eq!((sol.tau_d.at(0), sol.rho_d.at(0)), (0, horizon));
            assert!(sol.value.is_zero());

            let ambient = enumerate_stopping_times(&space, 0).unwrap();
            let rho_star = build_rho_star(&sol, &ambient).unwrap();
            for (tau, response) in ambient.iter().zip(rho_star.table()) {
                assert_eq!(tau, response);
            }
            let tau_ss = build_tau_starstar(&sol, &ambient).unwrap();
            assert!(tau_ss.table().iter().all(|s| s.at(0) == 0));
            assert!(check_nonanticipativity(&tau_ss, Kind::TypeI, &ambient));

            let zero = StoppingStrategy::constant(ambient.get(0).clone(), &ambient);
            assert_eq!(build_rho_starstar(&sol, &zero, &ambient).unwrap().at(0), 0);
            let last = StoppingStrategy::constant(ambient.get(horizon).clone(), &ambient);
            assert_eq!(build_tau_star(&sol, &last, &ambient).unwrap(), sol.tau_d);
            assert!(solution_invariant_failures(&sol, &u, &space).is_empty());
        }
    }

    #[test]
    fn degenerate_horizon() {
        let space = FilteredSpace::from_probabilities(0, vec![q(1, 3), q(2, 3)], vec![vec![vec![0], vec![1]]]).unwrap();
        let u = BiPayoff::from_fn(0, 2, |_, _, w| Rational::from_integer(3 * w as i64 + 1));
        let sol = solve(&u, &space).unwrap();
        assert_eq!(sol.value, q(1, 3) + q(8, 3));
        assert_eq!(sol.rho_d.times(), &[0, 0]);
        assert_eq!(sol.tau_d.times(), &[0, 0]);
        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        assert_eq!(ambient.len(), 1);
        assert!(corollary_identities(&sol, &u, &space, &ambient).unwrap());
    }

    #[test]
    fn dynkin_value_rejects_crossed_processes() {
        let space = FilteredSpace::deterministic(1);
        let hi = AdaptedProcess::deterministic(&[q(1, 1), q(0, 1)], &space);
        let lo = AdaptedProcess::deterministic(&[q(0, 1), q(0, 1)], &space);
        assert!(dynkin_value(&lo, &hi, &space).is_ok());
        assert!(matches!(dynkin_value(&hi, &lo, &space), Err(Error::Precondition(_))));
    }

    #[test]
    fn solve_rejects_invalid_payoff() {
        let mut filtration = vec![vec![vec![0, 1]]];
        filtration.push(vec![vec![0], vec![1]]);
        let space = FilteredSpace::from_probabilities(1, vec![q(1, 2), q(1, 2)], filtration).unwrap();
        let u = BiPayoff::from_fn(1, 2, |_, _, w| Rational::from_integer(w as i64));
        assert!(matches!(solve(&u, &space), Err(Error::Invalid(_))));
    }
}
