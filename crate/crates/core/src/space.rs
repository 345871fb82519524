//! Finite filtered probability spaces.
//!
//! The filtration is a sequence of partitions of the outcome set, one per
//! time `0..=T`, each refining the previous one. A random variable is
//! `F_t`-measurable iff it is constant on every atom of the partition at `t`.

use std::ops::Index;

use crate::error::{Error, Violation, ViolationCode};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub probability: Rational,
}

/// A partition of outcome indices.
pub type Partition = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSpace {
    horizon: usize,
    outcomes: Vec<Outcome>,
    filtration: Vec<Partition>,
    // atom_of[t][w] = index of the atom at time t containing w (usize::MAX if uncovered)
    atom_of: Vec<Vec<usize>>,
}

impl FilteredSpace {
    /// Builds a space and rejects it unless `validate_space` finds nothing.
    pub fn new(horizon: usize, outcomes: Vec<Outcome>, filtration: Vec<Partition>) -> Result<Self, Error> {
        let space = Self::from_parts_unchecked(horizon, outcomes, filtration);
        let violations = validate_space(&space);
        if violations.is_empty() {
            Ok(space)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Builds a space without checking any invariant. Only `validate_space`
    /// is meaningful on the result until it has been checked.
    pub fn from_parts_unchecked(horizon: usize, outcomes: Vec<Outcome>, filtration: Vec<Partition>) -> Self {
        let n = outcomes.len();
        let atom_of = filtration
            .iter()
            .map(|partition| {
                let mut map = vec![usize::MAX; n];
                for (a, atom) in partition.iter().enumerate() {
                    for &w in atom {
                        if w < n {
                            map[w] = a;
                        }
                    }
                }
                map
            })
            .collect();
        Self {
            horizon,
            outcomes,
            filtration,
            atom_of,
        }
    }

    /// Convenience constructor from bare probabilities; outcomes are labelled `w0, w1, ...`.
    pub fn from_probabilities(
        horizon: usize,
        probabilities: Vec<Rational>,
        filtration: Vec<Partition>,
    ) -> Result<Self, Error> {
        let outcomes = probabilities
            .into_iter()
            .enumerate()
            .map(|(i, probability)| Outcome {
                label: format!("w{i}"),
                probability,
            })
            .collect();
        Self::new(horizon, outcomes, filtration)
    }

    /// One outcome with probability one; every game on it is deterministic.
    pub fn deterministic(horizon: usize) -> Self {
        Self::from_probabilities(horizon, vec![Rational::one()], vec![vec![vec![0]]; horizon + 1])
            .expect("single-outcome space is valid")
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn probability(&self, w: usize) -> &Rational {
        &self.outcomes[w].probability
    }

    pub fn filtration(&self) -> &[Partition] {
        &self.filtration
    }

    pub fn atoms(&self, t: usize) -> &Partition {
        &self.filtration[t]
    }

    /// Index of the atom at time `t` that contains outcome `w`.
    pub fn atom_of(&self, t: usize, w: usize) -> usize {
        self.atom_of[t][w]
    }

    /// Atoms at `t + 1` contained in atom `a` at `t`, in partition order.
    pub fn children(&self, t: usize, a: usize) -> Vec<usize> {
        self.filtration[t + 1]
            .iter()
            .enumerate()
            .filter(|(_, atom)| atom.first().is_some_and(|&w| self.atom_of[t][w] == a))
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn check_time(&self, t: usize) -> Result<(), Error> {
        if t > self.horizon {
            Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            })
        } else {
            Ok(())
        }
    }

    fn atom_mass(&self, atom: &[usize]) -> Rational {
        atom.iter().map(|&w| self.probability(w)).sum()
    }
}

/// Lists every broken `FilteredSpace` invariant; empty means valid.
pub fn validate_space(space: &FilteredSpace) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = space.num_outcomes();

    if n == 0 {
        out.push(Violation::new(
            ViolationCode::PartitionCover,
            "outcomes",
            "outcome set is empty",
        ));
        return out;
    }
    for (w, o) in space.outcomes.iter().enumerate() {
        if !o.probability.is_positive() {
            out.push(Violation::new(
                ViolationCode::ProbabilityNonpositive,
                format!("outcome[{w}]"),
                format!("probability {} of {:?} must be > 0", o.probability, o.label),
            ));
        }
    }
    let total: Rational = space.outcomes.iter().map(|o| &o.probability).sum();
    if total != Rational::one() {
        out.push(Violation::new(
            ViolationCode::ProbabilityMass,
            "outcomes",
            format!("probabilities sum to {total}, expected 1/1"),
        ));
    }
    if space.filtration.len() != space.horizon + 1 {
        out.push(Violation::new(
            ViolationCode::FiltrationLength,
            "filtration",
            format!(
                "{} partitions given, expected {}",
                space.filtration.len(),
                space.horizon + 1
            ),
        ));
    }

    let mut cover_ok = vec![true; space.filtration.len()];
    for (t, partition) in space.filtration.iter().enumerate() {
        let mut seen = vec![0usize; n];
        for (a, atom) in partition.iter().enumerate() {
            if atom.is_empty() {
                out.push(Violation::new(
                    ViolationCode::PartitionCover,
                    format!("t={t} atom[{a}]"),
                    "atom is empty",
                ));
                cover_ok[t] = false;
            }
            for &w in atom {
                if w >= n {
                    out.push(Violation::new(
                        ViolationCode::PartitionCover,
                        format!("t={t} atom[{a}]"),
                        format!("outcome index {w} out of range (n={n})"),
                    ));
                    cover_ok[t] = false;
                } else {
                    seen[w] += 1;
                }
            }
        }
        for (w, &count) in seen.iter().enumerate() {
            if count != 1 {
                out.push(Violation::new(
                    ViolationCode::PartitionCover,
                    format!("t={t} outcome[{w}]"),
                    format!("outcome covered {count} times, expected exactly once"),
                ));
                cover_ok[t] = false;
            }
        }
    }

    for t in 0..space.filtration.len().saturating_sub(1) {
        if !(cover_ok[t] && cover_ok[t + 1]) {
            continue;
        }
        for (a, atom) in space.filtration[t + 1].iter().enumerate() {
            let parent = space.atom_of[t][atom[0]];
            if atom.iter().any(|&w| space.atom_of[t][w] != parent) {
                out.push(Violation::new(
                    ViolationCode::FiltrationRefinement,
                    format!("t={} atom[{a}]", t + 1),
                    format!("atom {atom:?} is not contained in a single atom at t={t}"),
                ));
            }
        }
    }
    out
}

/// An outcome-indexed vector of exact values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RandomVariable {
    values: Vec<Rational>,
}

impl RandomVariable {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn constant(num_outcomes: usize, c: Rational) -> Self {
        Self {
            values: vec![c; num_outcomes],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a * self + b * other`, pointwise.
    pub fn affine_combination(&self, a: &Rational, other: &RandomVariable, b: &Rational) -> RandomVariable {
        RandomVariable::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> RandomVariable {
        RandomVariable::new(self.values.iter().map(f).collect())
    }
}

impl Index<usize> for RandomVariable {
    type Output = Rational;
    fn index(&self, w: usize) -> &Rational {
        &self.values[w]
    }
}

fn check_len(x: &RandomVariable, space: &FilteredSpace) -> Result<(), Error> {
    if x.len() != space.num_outcomes() {
        return Err(Error::Dimension(format!(
            "random variable has {} entries, space has {} outcomes",
            x.len(),
            space.num_outcomes()
        )));
    }
    Ok(())
}

/// True iff `x` is constant on every atom of the partition at `t`.
pub fn is_measurable(x: &RandomVariable, space: &FilteredSpace, t: usize) -> Result<bool, Error> {
    space.check_time(t)?;
    check_len(x, space)?;
    Ok(space
        .atoms(t)
        .iter()
        .all(|atom| atom.iter().all(|&w| x[w] == x[atom[0]])))
}

/// `E[x | F_t]`, computed atom by atom.
pub fn cond_exp(x: &RandomVariable, space: &FilteredSpace, t: usize) -> Result<RandomVariable, Error> {
    space.check_time(t)?;
    check_len(x, space)?;
    let mut out = vec![Rational::zero(); space.num_outcomes()];
    for atom in space.atoms(t) {
        let mean = if atom.len() == 1 {
            x[atom[0]].clone()
        } else {
            let weighted: Rational = atom.iter().map(|&w| space.probability(w) * &x[w]).sum();
            weighted / space.atom_mass(atom)
        };
        for &w in atom {
            out[w] = mean.clone();
        }
    }
    Ok(RandomVariable::new(out))
}

/// `E[x]` under `P`.
pub fn expectation(x: &RandomVariable, space: &FilteredSpace) -> Result<Rational, Error> {
    check_len(x, space)?;
    Ok(x.values.iter().enumerate().map(|(w, v)| space.probability(w) * v).sum())
}

/// A time-indexed family of random variables, `values[t]` measurable at `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedProcess {
    values: Vec<RandomVariable>,
}

impl AdaptedProcess {
    /// Checks dimensions and adaptedness against `space`.
    pub fn new(values: Vec<RandomVariable>, space: &FilteredSpace) -> Result<Self, Error> {
        if values.len() != space.horizon() + 1 {
            return Err(Error::Dimension(format!(
                "process has {} time slices, expected {}",
                values.len(),
                space.horizon() + 1
            )));
        }
        let mut violations = Vec::new();
        for (t, x) in values.iter().enumerate() {
            check_len(x, space)?;
            for (a, atom) in space.atoms(t).iter().enumerate() {
                if atom.iter().any(|&w| x[w] != x[atom[0]]) {
                    violations.push(Violation::new(
                        ViolationCode::ProcessAdaptedness,
                        format!("t={t} atom[{a}]"),
                        format!("value not constant on atom {atom:?}"),
                    ));
                }
            }
        }
        if violations.is_empty() {
            Ok(Self { values })
        } else {
            Err(Error::Invalid(violations))
        }
    }

    pub(crate) fn new_unchecked(values: Vec<RandomVariable>) -> Self {
        Self { values }
    }

    pub fn from_integers(rows: &[&[i64]], space: &FilteredSpace) -> Result<Self, Error> {
        Self::new(rows.iter().map(|r| RandomVariable::from_integers(r)).collect(), space)
    }

    /// Deterministic process `t -> values[t]`.
    pub fn deterministic(values: &[Rational], space: &FilteredSpace) -> Self {
        Self {
            values: values
                .iter()
                .map(|c| RandomVariable::constant(space.num_outcomes(), c.clone()))
                .collect(),
        }
    }

    pub fn at(&self, t: usize) -> &RandomVariable {
        &self.values[t]
    }

    pub fn get(&self, t: usize, w: usize) -> &Rational {
        &self.values[t][w]
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn slices(&self) -> &[RandomVariable] {
        &self.values
    }

    /// Values per atom of each partition, time-major.
    pub fn per_atom(&self, space: &FilteredSpace) -> Vec<Vec<Rational>> {
        self.values
            .iter()
            .enumerate()
            .map(|(t, x)| space.atoms(t).iter().map(|atom| x[atom[0]].clone()).collect())
            .collect()
    }
}
