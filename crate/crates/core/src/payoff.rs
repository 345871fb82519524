//! Bivariate payoffs `U(s, t, w)` and generators for standard game families.
//!
//! The first time index belongs to the minimizing (outer) player and the
//! second to the maximizing one. `U(s, t, .)` must be measurable with
//! respect to the partition at `max(s, t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Violation, ViolationCode};
use crate::rational::Rational;
use crate::space::{AdaptedProcess, FilteredSpace, RandomVariable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPayoff {
    horizon: usize,
    num_outcomes: usize,
    table: Vec<Rational>,
}

impl BiPayoff {
    pub fn from_fn(horizon: usize, num_outcomes: usize, mut f: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let mut table = Vec::with_capacity((horizon + 1) * (horizon + 1) * num_outcomes);
        for s in 0..=horizon {
            for t in 0..=horizon {
                for w in 0..num_outcomes {
                    table.push(f(s, t, w));
                }
            }
        }
        Self {
            horizon,
            num_outcomes,
            table,
        }
    }

    /// From a nested `[s][t][w]` table.
    pub fn from_nested(nested: &[Vec<Vec<Rational>>]) -> Result<Self, Error> {
        let size = nested.len();
        if size == 0 {
            return Err(Error::Dimension("payoff table is empty".into()));
        }
        let num_outcomes = nested[0].first().map_or(0, Vec::len);
        for (s, row) in nested.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!(
                    "row s={s} has {} columns, expected {size}",
                    row.len()
                )));
            }
            for (t, cell) in row.iter().enumerate() {
                if cell.len() != num_outcomes {
                    return Err(Error::Dimension(format!(
                        "cell ({s},{t}) has {} outcomes, expected {num_outcomes}",
                        cell.len()
                    )));
                }
            }
        }
        Ok(Self::from_fn(size - 1, num_outcomes, |s, t, w| nested[s][t][w].clone()))
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    fn offset(&self, s: usize, t: usize) -> usize {
        (s * (self.horizon + 1) + t) * self.num_outcomes
    }

    pub fn get(&self, s: usize, t: usize, w: usize) -> &Rational {
        &self.table[self.offset(s, t) + w]
    }

    /// `U(s, t, .)` as an outcome-indexed slice.
    pub fn slice(&self, s: usize, t: usize) -> &[Rational] {
        let o = self.offset(s, t);
        &self.table[o..o + self.num_outcomes]
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..=self.horizon)
            .map(|s| (0..=self.horizon).map(|t| self.slice(s, t).to_vec()).collect())
            .collect()
    }

    /// Pointwise image under `f`; measurability is preserved.
    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            horizon: self.horizon,
            num_outcomes: self.num_outcomes,
            table: self.table.iter().map(f).collect(),
        }
    }

    /// The random variable `w -> U(rho(w), tau(w), w)`.
    pub fn realized(&self, rho: &[usize], tau: &[usize]) -> RandomVariable {
        RandomVariable::new(
            (0..self.num_outcomes)
                .map(|w| self.get(rho[w], tau[w], w).clone())
                .collect(),
        )
    }
}

/// Lists every `(s, t)` slice that is not measurable at `max(s, t)`.
pub fn validate_payoff(u: &BiPayoff, space: &FilteredSpace) -> Result<Vec<Violation>, Error> {
    if u.horizon() != space.horizon() || u.num_outcomes() != space.num_outcomes() {
        return Err(Error::Dimension(format!(
            "payoff is {}x{}x{}, space needs {}x{}x{}",
            u.horizon() + 1,
            u.horizon() + 1,
            u.num_outcomes(),
            space.horizon() + 1,
            space.horizon() + 1,
            space.num_outcomes()
        )));
    }
    let mut out = Vec::new();
    for s in 0..=u.horizon() {
        for t in 0..=u.horizon() {
            let level = s.max(t);
            let slice = u.slice(s, t);
            for (a, atom) in space.atoms(level).iter().enumerate() {
                if atom.iter().any(|&w| slice[w] != slice[atom[0]]) {
                    out.push(Violation::new(
                        ViolationCode::PayoffMeasurability,
                        format!("(s={s},t={t}) atom[{a}]"),
                        format!("U(s,t,.) not constant on atom {atom:?} at t={level}"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn check_process(p: &AdaptedProcess, space: &FilteredSpace, name: &str) -> Result<(), Error> {
    if p.horizon() != space.horizon() || p.at(0).len() != space.num_outcomes() {
        return Err(Error::Dimension(format!("process {name} does not match the space")));
    }
    Ok(())
}

/// `U(s, t) = f_s` if `s < t`, else `g_t`. Requires `f >= g` pointwise.
pub fn gen_dynkin(f: &AdaptedProcess, g: &AdaptedProcess, space: &FilteredSpace) -> Result<BiPayoff, Error> {
    check_process(f, space, "f")?;
    check_process(g, space, "g")?;
    for t in 0..=space.horizon() {
        for w in 0..space.num_outcomes() {
            if f.get(t, w) < g.get(t, w) {
                return Err(Error::Precondition(format!(
                    "f < g at (t={t}, w={w}): {} < {}",
                    f.get(t, w),
                    g.get(t, w)
                )));
            }
        }
    }
    Ok(BiPayoff::from_fn(space.horizon(), space.num_outcomes(), |s, t, w| {
        if s < t {
            f.get(s, w).clone()
        } else {
            g.get(t, w).clone()
        }
    }))
}

/// `U(s, t) = |s - t|`.
pub fn gen_distance(space: &FilteredSpace) -> BiPayoff {
    BiPayoff::from_fn(space.horizon(), space.num_outcomes(), |s, t, _| {
        Rational::from_integer(s.abs_diff(t) as i64)
    })
}

/// `U(s, t) = 1` if `s != t`, else 0.
pub fn gen_mismatch(space: &FilteredSpace) -> BiPayoff {
    BiPayoff::from_fn(space.horizon(), space.num_outcomes(), |s, t, _| {
        Rational::from_integer(i64::from(s != t))
    })
}

/// Arithmetic regime of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// Scalar utility applied to the spread `f_s - g_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Utility {
    Identity,
    /// Concave piecewise-linear `x -> min_i (slope_i * x + intercept_i)`.
    PiecewiseLinear {
        pieces: Vec<(Rational, Rational)>,
    },
    /// `x -> 1 - exp(-lambda * x)`; float mode only.
    Exponential {
        lambda: Rational,
    },
}

impl Utility {
    pub fn is_exact(&self) -> bool {
        !matches!(self, Utility::Exponential { .. })
    }

    pub fn eval(&self, x: &Rational, mode: Mode) -> Result<Rational, Error> {
        match self {
            Utility::Identity => Ok(x.clone()),
            Utility::PiecewiseLinear { pieces } => pieces
                .iter()
                .map(|(slope, intercept)| slope * x + intercept)
                .min()
                .ok_or_else(|| Error::Precondition("piecewise-linear utility has no pieces".into())),
            Utility::Exponential { lambda } => {
                if mode == Mode::Exact {
                    return Err(Error::Mode("exponential utility requires float mode".into()));
                }
                let y = 1.0 - (-lambda.to_f64() * x.to_f64()).exp();
                Rational::from_f64(y).ok_or_else(|| Error::Precondition(format!("utility not finite at {x}")))
            }
        }
    }
}

/// `U(s, t) = utility(f_s - g_t)`.
pub fn gen_utility_spread(
    f: &AdaptedProcess,
    g: &AdaptedProcess,
    utility: &Utility,
    mode: Mode,
    space: &FilteredSpace,
) -> Result<BiPayoff, Error> {
    check_process(f, space, "f")?;
    check_process(g, space, "g")?;
    if mode == Mode::Exact && !utility.is_exact() {
        return Err(Error::Mode("exponential utility requires float mode".into()));
    }
    let n = space.num_outcomes();
    let mut table = Vec::new();
    for s in 0..=space.horizon() {
        let mut row = Vec::new();
        for t in 0..=space.horizon() {
            let cell = (0..n)
                .map(|w| utility.eval(&(f.get(s, w) - g.get(t, w)), mode))
                .collect::<Result<Vec<_>, _>>()?;
            row.push(cell);
        }
        table.push(row);
    }
    BiPayoff::from_nested(&table)
}

/// Market-entry instantiation: the earlier entry time drives revenue and the
/// later one drives the follower's cost reduction,
/// `U(s, t) = first_mover_{min(s,t)} - second_mover_discount_{max(s,t)}`.
pub fn gen_market_entry(
    first_mover: &AdaptedProcess,
    second_mover_discount: &AdaptedProcess,
    space: &FilteredSpace,
) -> Result<BiPayoff, Error> {
    check_process(first_mover, space, "first_mover")?;
    check_process(second_mover_discount, space, "second_mover_discount")?;
    Ok(BiPayoff::from_fn(space.horizon(), space.num_outcomes(), |s, t, w| {
        first_mover.get(s.min(t), w) - second_mover_discount.get(s.max(t), w)
    }))
}

/// Extends a process that matures before the horizon by freezing its last value.
pub fn pad_to_horizon(mut values: Vec<RandomVariable>, horizon: usize) -> Result<Vec<RandomVariable>, Error> {
    let last = values
        .last()
        .cloned()
        .ok_or_else(|| Error::Dimension("process has no time slices".into()))?;
    if values.len() > horizon + 1 {
        return Err(Error::Dimension(format!(
            "process has {} slices, horizon allows {}",
            values.len(),
            horizon + 1
        )));
    }
    values.resize(horizon + 1, last);
    Ok(values)
}

/// Process rows as they appear in scenario files: time-major, outcome-indexed.
pub type ProcessRows = Vec<Vec<Rational>>;

/// JSON-facing payoff description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum PayoffSpec {
    Explicit {
        table: Vec<Vec<Vec<Rational>>>,
    },
    Dynkin {
        f: ProcessRows,
        g: ProcessRows,
        #[serde(default, skip_serializing_if = "is_false")]
        pad_to_horizon: bool,
    },
    Distance,
    Mismatch,
    UtilitySpread {
        f: ProcessRows,
        g: ProcessRows,
        utility: Utility,
        #[serde(default, skip_serializing_if = "is_false")]
        pad_to_horizon: bool,
    },
    MarketEntry {
        first_mover: ProcessRows,
        second_mover_discount: ProcessRows,
        #[serde(default, skip_serializing_if = "is_false")]
        pad_to_horizon: bool,
    },
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn process_from_rows(rows: &ProcessRows, pad: bool, space: &FilteredSpace) -> Result<AdaptedProcess, Error> {
    let mut values: Vec<RandomVariable> = rows.iter().cloned().map(RandomVariable::new).collect();
    if pad {
        values = pad_to_horizon(values, space.horizon())?;
    }
    AdaptedProcess::new(values, space)
}

impl PayoffSpec {
    pub fn generator_name(&self) -> &'static str {
        match self {
            PayoffSpec::Explicit { .. } => "explicit",
            PayoffSpec::Dynkin { .. } => "dynkin",
            PayoffSpec::Distance => "distance",
            PayoffSpec::Mismatch => "mismatch",
            PayoffSpec::UtilitySpread { .. } => "utility_spread",
            PayoffSpec::MarketEntry { .. } => "market_entry",
        }
    }

    /// Materializes the payoff; processes are checked for adaptedness first.
    pub fn build(&self, space: &FilteredSpace, mode: Mode) -> Result<BiPayoff, Error> {
        match self {
            PayoffSpec::Explicit { table } => BiPayoff::from_nested(table),
            PayoffSpec::Dynkin { f, g, pad_to_horizon } => {
                let f = process_from_rows(f, *pad_to_horizon, space)?;
                let g = process_from_rows(g, *pad_to_horizon, space)?;
                gen_dynkin(&f, &g, space)
            }
            PayoffSpec::Distance => Ok(gen_distance(space)),
            PayoffSpec::Mismatch => Ok(gen_mismatch(space)),
            PayoffSpec::UtilitySpread {
                f,
                g,
                utility,
                pad_to_horizon,
            } => {
                let f = process_from_rows(f, *pad_to_horizon, space)?;
                let g = process_from_rows(g, *pad_to_horizon, space)?;
                gen_utility_spread(&f, &g, utility, mode, space)
            }
            PayoffSpec::MarketEntry {
                first_mover,
                second_mover_discount,
                pad_to_horizon,
            } => {
                let a = process_from_rows(first_mover, *pad_to_horizon, space)?;
                let b = process_from_rows(second_mover_discount, *pad_to_horizon, space)?;
                gen_market_entry(&a, &b, space)
            }
        }
    }

    pub fn requires_float(&self) -> bool {
        matches!(self, PayoffSpec::UtilitySpread { utility, .. } if !utility.is_exact())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::space::is_measurable;

    fn binary(horizon: usize) -> FilteredSpace {
        let mut filtration = vec![vec![vec![0, 1]]];
        filtration.extend(std::iter::repeat_n(vec![vec![0], vec![1]], horizon));
        FilteredSpace::from_probabilities(horizon, vec![q(1, 2), q(1, 2)], filtration).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect()
    }

    #[test]
    fn deterministic_payoff_is_measurable() {
        let space = binary(2);
        let u = BiPayoff::from_fn(2, 2, |s, t, _| Rational::from_integer((s * 3 + t) as i64));
        assert!(validate_payoff(&u, &space).unwrap().is_empty());
    }

    #[test]
    fn anticipating_corner_is_flagged() {
        let space = binary(1);
        let u = BiPayoff::from_fn(1, 2, |s, t, w| {
            Rational::from_integer(if s == 0 && t == 0 { w as i64 } else { 0 })
        });
        let v = validate_payoff(&u, &space).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, ViolationCode::PayoffMeasurability);
        assert!(v[0].location.starts_with("(s=0,t=0)"));
        let wrong = BiPayoff::from_fn(2, 2, |_, _, _| Rational::zero());
        assert!(matches!(validate_payoff(&wrong, &space), Err(Error::Dimension(_))));
    }

    #[test]
    fn dynkin_examples() {
        let space = binary(2);
        let one = AdaptedProcess::deterministic(&[q(1, 1), q(1, 1), q(1, 1)], &space);
        let zero = AdaptedProcess::deterministic(&[q(0, 1), q(0, 1), q(0, 1)], &space);
        let u = gen_dynkin(&one, &zero, &space).unwrap();
        for s in 0..=2 {
            for t in 0..=2 {
                assert_eq!(u.get(s, t, 0), &Rational::from_integer(i64::from(s < t)));
            }
        }
        let g = AdaptedProcess::from_integers(&[&[1, 1], &[2, 5], &[0, 3]], &space).unwrap();
        let u = gen_dynkin(&g, &g, &space).unwrap();
        for s in 0..=2 {
            for t in 0..=2 {
                for w in 0..2 {
                    assert_eq!(u.get(s, t, w), g.get(s.min(t), w));
                    assert!(is_measurable(&RandomVariable::new(u.slice(s, t).to_vec()), &space, s.min(t)).unwrap());
                }
            }
        }
        let err = gen_dynkin(&zero, &one, &space).unwrap_err();
        assert!(err.to_string().contains("t=0, w=0"));
    }

    #[test]
    fn distance_and_mismatch() {
        let d = gen_distance(&FilteredSpace::deterministic(1));
        assert_eq!(
            d.to_nested(),
            vec![vec![vec![q(0, 1)], vec![q(1, 1)]], vec![vec![q(1, 1)], vec![q(0, 1)]]]
        );
        let m = gen_mismatch(&FilteredSpace::deterministic(1));
        assert_eq!(m, d);
        let d5 = gen_distance(&FilteredSpace::deterministic(5));
        assert_eq!(d5.get(0, 5, 0), &q(5, 1));
        let m5 = gen_mismatch(&FilteredSpace::deterministic(5));
        for s in 0..=5 {
            assert!(d5.get(s, s, 0).is_zero());
            assert!(m5.get(s, s, 0).is_zero());
        }
    }

    #[test]
    fn utility_spread_examples() {
        let space = binary(2);
        let f = AdaptedProcess::from_integers(&[&[1, 1], &[3, 0], &[4, -2]], &space).unwrap();
        let zero = AdaptedProcess::deterministic(&[q(0, 1), q(0, 1), q(0, 1)], &space);
        let u = gen_utility_spread(&f, &zero, &Utility::Identity, Mode::Exact, &space).unwrap();
        for s in 0..=2 {
            for t in 0..=2 {
                assert_eq!(u.slice(s, t), f.at(s).values());
            }
        }
        let det = AdaptedProcess::deterministic(&[q(1, 1), q(4, 1), q(9, 1)], &space);
        let u = gen_utility_spread(&det, &det, &Utility::Identity, Mode::Exact, &space).unwrap();
        for s in 0..=2 {
            for t in 0..=2 {
                assert_eq!(u.get(s, t, 0), &-u.get(t, s, 0));
            }
        }
        let capped = Utility::PiecewiseLinear {
            pieces: vec![(q(1, 1), q(0, 1)), (q(0, 1), q(2, 1))],
        };
        let u = gen_utility_spread(&f, &zero, &capped, Mode::Exact, &space).unwrap();
        assert_eq!(u.get(2, 0, 0), &q(2, 1));
        assert_eq!(u.get(2, 0, 1), &q(-2, 1));
        assert!(validate_payoff(&u, &space).unwrap().is_empty());
        let exp = Utility::Exponential { lambda: q(1, 2) };
        assert!(matches!(
            gen_utility_spread(&f, &zero, &exp, Mode::Exact, &space),
            Err(Error::Mode(_))
        ));
        assert!(gen_utility_spread(&f, &zero, &exp, Mode::Float, &space).is_ok());
    }

    #[test]
    fn market_entry_examples() {
        let space = binary(2);
        let a = AdaptedProcess::deterministic(&[q(3, 1), q(3, 1), q(3, 1)], &space);
        let b = AdaptedProcess::deterministic(&[q(1, 1), q(1, 1), q(1, 1)], &space);
        let u = gen_market_entry(&a, &b, &space).unwrap();
        assert!(u.to_nested().iter().flatten().flatten().all(|x| *x == q(2, 1)));
        let revenue = AdaptedProcess::from_integers(&[&[5, 5], &[2, 7], &[1, 0]], &space).unwrap();
        let none = AdaptedProcess::deterministic(&[q(0, 1), q(0, 1), q(0, 1)], &space);
        let u = gen_market_entry(&revenue, &none, &space).unwrap();
        for s in 0..=2 {
            for t in 0..=2 {
                assert_eq!(u.slice(s, t), revenue.at(s.min(t)).values());
            }
        }
    }

    #[test]
    fn padding_freezes_last_value() {
        let space = binary(3);
        let spec = PayoffSpec::Dynkin {
            f: ints(&[&[4, 4], &[5, 6]]),
            g: ints(&[&[0, 0], &[1, 2], &[1, 2], &[1, 2]]),
            pad_to_horizon: true,
        };
        let u = spec.build(&space, Mode::Exact).unwrap();
        assert_eq!(u.get(3, 3, 1), &q(2, 1));
        assert_eq!(u.get(2, 3, 1), &q(6, 1));
        let unpadded = PayoffSpec::Dynkin {
            f: ints(&[&[4, 4], &[5, 6]]),
            g: ints(&[&[0, 0], &[1, 2], &[1, 2], &[1, 2]]),
            pad_to_horizon: false,
        };
        assert!(matches!(unpadded.build(&space, Mode::Exact), Err(Error::Dimension(_))));
    }

    #[test]
    fn spec_rejects_non_adapted_process() {
        let space = binary(1);
        let spec = PayoffSpec::MarketEntry {
            first_mover: ints(&[&[0, 1], &[0, 1]]),
            second_mover_discount: ints(&[&[0, 0], &[0, 0]]),
            pad_to_horizon: false,
        };
        match spec.build(&space, Mode::Exact) {
            Err(Error::Invalid(v)) => assert_eq!(v[0].code, ViolationCode::ProcessAdaptedness),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_json_shape() {
        let spec: PayoffSpec = serde_json::from_str(r#"{"generator":"mismatch"}"#).unwrap();
        assert_eq!(spec, PayoffSpec::Mismatch);
        let spec: PayoffSpec = serde_json::from_str(
            r#"{"generator":"utility_spread","f":[["1"]],"g":[["0/1"]],"utility":{"kind":"piecewise_linear","pieces":[["1/1","0/1"],["0/1","2/1"]]}}"#,
        )
        .unwrap();
        assert_eq!(spec.generator_name(), "utility_spread");
        assert!(!spec.requires_float());
    }
}
