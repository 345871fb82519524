//! Stopping times, their exhaustive enumeration, and stopping strategies
//! (maps from opponent stopping times to own stopping times) together with
//! the two non-anticipativity predicates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::space::FilteredSpace;

/// Default cap on the number of stopping times materialized by
/// [`enumerate_stopping_times`].
pub const DEFAULT_STOPPING_TIME_CAP: u64 = 1_000_000;

/// Default cap on `|T|^|T|`, the number of candidate maps a strategy sweep may visit.
pub const DEFAULT_STRATEGY_CAP: u64 = 10_000_000;

/// An outcome-indexed vector of times satisfying `{tau = t} in F_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoppingTime {
    times: Vec<usize>,
}

impl StoppingTime {
    pub fn new(times: Vec<usize>, space: &FilteredSpace) -> Result<Self, Error> {
        if is_stopping_time(&times, space)? {
            Ok(Self { times })
        } else {
            Err(Error::NotStoppingTime(format!("{times:?} is not adapted")))
        }
    }

    pub(crate) fn new_unchecked(times: Vec<usize>) -> Self {
        Self { times }
    }

    pub fn constant(space: &FilteredSpace, t: usize) -> Result<Self, Error> {
        space.check_time(t)?;
        Ok(Self {
            times: vec![t; space.num_outcomes()],
        })
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn at(&self, w: usize) -> usize {
        self.times[w]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

impl fmt::Display for StoppingTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.times)
    }
}

/// True iff every level set `{times = t}` is a union of atoms at `t`.
pub fn is_stopping_time(times: &[usize], space: &FilteredSpace) -> Result<bool, Error> {
    if times.len() != space.num_outcomes() {
        return Err(Error::Dimension(format!(
            "time vector has {} entries, space has {} outcomes",
            times.len(),
            space.num_outcomes()
        )));
    }
    if let Some(&t) = times.iter().find(|&&t| t > space.horizon()) {
        return Err(Error::TimeOutOfRange {
            t,
            horizon: space.horizon(),
        });
    }
    for t in 0..=space.horizon() {
        for atom in space.atoms(t) {
            let first = times[atom[0]] == t;
            if atom.iter().any(|&w| (times[w] == t) != first) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `N(atom) = 1 + prod N(child)` with `N = 1` at the horizon, saturating.
fn count_from_atom(space: &FilteredSpace, t: usize, atom: usize) -> u128 {
    if t == space.horizon() {
        return 1;
    }
    let product = space
        .children(t, atom)
        .into_iter()
        .fold(1u128, |acc, c| acc.saturating_mul(count_from_atom(space, t + 1, c)));
    product.saturating_add(1)
}

/// `|T_{from_t}|` by the recursive product formula (saturating at `u128::MAX`).
pub fn count_stopping_times(space: &FilteredSpace, from_t: usize) -> Result<u128, Error> {
    space.check_time(from_t)?;
    Ok((0..space.atoms(from_t).len()).fold(1u128, |acc, a| acc.saturating_mul(count_from_atom(space, from_t, a))))
}

/// The set `T_t` in canonical order.
#[derive(Debug, Clone)]
pub struct StoppingTimeSet {
    from: usize,
    items: Vec<StoppingTime>,
    index: HashMap<StoppingTime, usize>,
}

impl StoppingTimeSet {
    fn from_items(from: usize, items: Vec<StoppingTime>) -> Self {
        let index = items.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { from, items, index }
    }

    pub fn from_time(&self) -> usize {
        self.from
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[StoppingTime] {
        &self.items
    }

    pub fn get(&self, i: usize) -> &StoppingTime {
        &self.items[i]
    }

    pub fn index_of(&self, s: &StoppingTime) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, StoppingTime> {
        self.items.iter()
    }
}

impl<'a> IntoIterator for &'a StoppingTimeSet {
    type Item = &'a StoppingTime;
    type IntoIter = std::slice::Iter<'a, StoppingTime>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Partial assignments on a single atom, as `(outcome, time)` lists.
type Local = Vec<Vec<(usize, usize)>>;

fn local_options(space: &FilteredSpace, t: usize, atom: usize) -> Local {
    let stop: Vec<(usize, usize)> = space.atoms(t)[atom].iter().map(|&w| (w, t)).collect();
    let mut out = vec![stop];
    if t < space.horizon() {
        let children: Vec<Local> = space
            .children(t, atom)
            .into_iter()
            .map(|c| local_options(space, t + 1, c))
            .collect();
        out.extend(cartesian(&children));
    }
    out
}

/// Odometer product with the first factor most significant.
fn cartesian(factors: &[Local]) -> Local {
    let mut out = Vec::new();
    if factors.iter().any(|f| f.is_empty()) {
        return out;
    }
    let mut digits = vec![0usize; factors.len()];
    loop {
        out.push(
            factors
                .iter()
                .zip(&digits)
                .flat_map(|(f, &d)| f[d].iter().copied())
                .collect(),
        );
        let mut k = factors.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < factors[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Enumerates `T_{from_t}` with the default cap.
pub fn enumerate_stopping_times(space: &FilteredSpace, from_t: usize) -> Result<StoppingTimeSet, Error> {
    enumerate_stopping_times_capped(space, from_t, DEFAULT_STOPPING_TIME_CAP)
}

/// Enumerates `T_{from_t}` in the lexicographic order of per-atom
/// stop/continue decisions (stop before continue, earlier atoms first).
pub fn enumerate_stopping_times_capped(
    space: &FilteredSpace,
    from_t: usize,
    cap: u64,
) -> Result<StoppingTimeSet, Error> {
    let count = count_stopping_times(space, from_t)?;
    if count > u128::from(cap) {
        return Err(Error::EnumerationOverflow {
            what: "stopping-time",
            size: if count == u128::MAX {
                "> 2^128".into()
            } else {
                count.to_string()
            },
            cap,
        });
    }
    let roots: Vec<Local> = (0..space.atoms(from_t).len())
        .map(|a| local_options(space, from_t, a))
        .collect();
    let n = space.num_outcomes();
    let items = cartesian(&roots)
        .into_iter()
        .map(|assignment| {
            let mut times = vec![0; n];
            for (w, t) in assignment {
                times[w] = t;
            }
            StoppingTime::new_unchecked(times)
        })
        .collect();
    Ok(StoppingTimeSet::from_items(from_t, items))
}

/// Which non-anticipativity condition a strategy satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// Reacts to the opponent from the next step on.
    TypeI,
    /// May react at the very step the opponent stops.
    TypeII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyTag {
    TypeI,
    TypeII,
    Unchecked,
}

impl From<Kind> for StrategyTag {
    fn from(k: Kind) -> Self {
        match k {
            Kind::TypeI => StrategyTag::TypeI,
            Kind::TypeII => StrategyTag::TypeII,
        }
    }
}

/// Pointwise form of the pairwise condition: with `a = rho(s1)(w)`,
/// `b = rho(s2)(w)` and `m = min(s1(w), s2(w))`, Type I demands
/// `a == b <= m` or `min(a, b) > m`; Type II demands `a == b < m` or `min(a, b) >= m`.
#[inline]
pub fn pair_condition(kind: Kind, a: usize, b: usize, m: usize) -> bool {
    match kind {
        Kind::TypeI => (a == b && a <= m) || a.min(b) > m,
        Kind::TypeII => (a == b && a < m) || a.min(b) >= m,
    }
}

/// A total map from an ambient stopping-time set to stopping times.
/// `table[i]` is the response to `ambient.get(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingStrategy {
    table: Vec<StoppingTime>,
    tag: StrategyTag,
}

impl StoppingStrategy {
    pub fn unchecked(table: Vec<StoppingTime>) -> Self {
        Self {
            table,
            tag: StrategyTag::Unchecked,
        }
    }

    /// A strategy that ignores its argument.
    pub fn constant(response: StoppingTime, ambient: &StoppingTimeSet) -> Self {
        Self::unchecked(vec![response; ambient.len()])
    }

    /// Builds a strategy from response indices into `ambient`.
    pub fn from_indices(indices: &[usize], ambient: &StoppingTimeSet) -> Self {
        Self::unchecked(indices.iter().map(|&i| ambient.get(i).clone()).collect())
    }

    /// Checks `kind` exhaustively and tags the strategy on success.
    pub fn certify(mut self, kind: Kind, ambient: &StoppingTimeSet) -> Result<Self, Error> {
        if let Some(w) = find_anticipation(&self, kind, ambient)? {
            return Err(Error::Invariant(format!("strategy is not {kind:?}: {w}")));
        }
        self.tag = kind.into();
        Ok(self)
    }

    pub fn tag(&self) -> StrategyTag {
        self.tag
    }

    pub fn table(&self) -> &[StoppingTime] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Response to `sigma`, which must be a member of `ambient`.
    pub fn apply(&self, sigma: &StoppingTime, ambient: &StoppingTimeSet) -> Result<&StoppingTime, Error> {
        let i = ambient.index_of(sigma).ok_or(Error::NotInAmbient)?;
        self.table.get(i).ok_or(Error::NotInAmbient)
    }
}

/// A pair `(first, second)` of ambient indices and an outcome at which
/// both branches of the pairwise condition fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anticipation {
    pub first: usize,
    pub second: usize,
    pub outcome: usize,
}

impl fmt::Display for Anticipation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair ({}, {}) fails at outcome {}",
            self.first, self.second, self.outcome
        )
    }
}

/// First violating pair, or `None` when `s` satisfies `kind`.
pub fn find_anticipation(
    s: &StoppingStrategy,
    kind: Kind,
    ambient: &StoppingTimeSet,
) -> Result<Option<Anticipation>, Error> {
    if s.len() != ambient.len() {
        return Err(Error::Dimension(format!(
            "strategy has {} entries, ambient set has {}",
            s.len(),
            ambient.len()
        )));
    }
    for i in 0..ambient.len() {
        for j in i + 1..ambient.len() {
            let (s1, s2) = (ambient.get(i), ambient.get(j));
            let (r1, r2) = (&s.table[i], &s.table[j]);
            for w in 0..s1.len() {
                let m = s1.at(w).min(s2.at(w));
                if !pair_condition(kind, r1.at(w), r2.at(w), m) {
                    return Ok(Some(Anticipation {
                        first: i,
                        second: j,
                        outcome: w,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive pairwise check of the `kind` condition, pointwise in each outcome.
pub fn check_nonanticipativity(s: &StoppingStrategy, kind: Kind, ambient: &StoppingTimeSet) -> bool {
    matches!(find_anticipation(s, kind, ambient), Ok(None))
}

/// Backtracking enumeration of all strategies of one kind over an ambient
/// set. Candidates are pruned on the first incompatible pair.
pub struct StrategyEnumerator<'a> {
    ambient: &'a StoppingTimeSet,
    kind: Kind,
    n: usize,
    // compat[((i * n + j) * n + a) * n + b], for i < j
    compat: Vec<bool>,
    assignment: Vec<usize>,
    cursor: Vec<usize>,
    depth: usize,
    done: bool,
}

impl<'a> StrategyEnumerator<'a> {
    fn new(ambient: &'a StoppingTimeSet, kind: Kind) -> Self {
        let n = ambient.len();
        let mut compat = vec![false; n * n * n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (s1, s2) = (ambient.get(i), ambient.get(j));
                for a in 0..n {
                    for b in 0..n {
                        let (ra, rb) = (ambient.get(a), ambient.get(b));
                        compat[((i * n + j) * n + a) * n + b] =
                            (0..s1.len()).all(|w| pair_condition(kind, ra.at(w), rb.at(w), s1.at(w).min(s2.at(w))));
                    }
                }
            }
        }
        Self {
            ambient,
            kind,
            n,
            compat,
            assignment: vec![0; n],
            cursor: vec![0; n],
            depth: 0,
            done: n == 0,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    fn consistent(&self, k: usize, v: usize) -> bool {
        let n = self.n;
        (0..k).all(|i| self.compat[((i * n + k) * n + self.assignment[i]) * n + v])
    }

    /// Next strategy as response indices into the ambient set.
    pub fn next_indices(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        loop {
            if self.depth == self.n {
                self.depth = self.n - 1;
            }
            let k = self.depth;
            let mut found = None;
            while self.cursor[k] < self.n {
                let v = self.cursor[k];
                self.cursor[k] += 1;
                if self.consistent(k, v) {
                    found = Some(v);
                    break;
                }
            }
            match found {
                Some(v) => {
                    self.assignment[k] = v;
                    self.depth = k + 1;
                    if self.depth == self.n {
                        return Some(&self.assignment);
                    }
                    self.cursor[self.depth] = 0;
                }
                None => {
                    if k == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth = k - 1;
                }
            }
        }
    }
}

impl Iterator for StrategyEnumerator<'_> {
    type Item = StoppingStrategy;

    fn next(&mut self) -> Option<StoppingStrategy> {
        let kind = self.kind;
        let ambient = self.ambient;
        self.next_indices().map(|idx| {
            let mut s = StoppingStrategy::from_indices(idx, ambient);
            s.tag = kind.into();
            s
        })
    }
}

/// `|T|^|T|`, saturating.
pub fn candidate_map_count(n: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(n as u128);
    }
    acc
}

/// Streams all strategies of `kind` over `ambient`, default cap.
pub fn enumerate_strategies(ambient: &StoppingTimeSet, kind: Kind) -> Result<StrategyEnumerator<'_>, Error> {
    enumerate_strategies_capped(ambient, kind, DEFAULT_STRATEGY_CAP)
}

/// Fails before streaming when `|T|^|T|` exceeds `cap`.
pub fn enumerate_strategies_capped(
    ambient: &StoppingTimeSet,
    kind: Kind,
    cap: u64,
) -> Result<StrategyEnumerator<'_>, Error> {
    let count = candidate_map_count(ambient.len());
    if count > u128::from(cap) {
        return Err(Error::EnumerationOverflow {
            what: "strategy",
            size: if count == u128::MAX {
                format!("{}^{}", ambient.len(), ambient.len())
            } else {
                count.to_string()
            },
            cap,
        });
    }
    Ok(StrategyEnumerator::new(ambient, kind))
}

/// `sigma -> family[sigma](w)`, pointwise. `family[t]` must be a stopping
/// time with values `>= t`.
pub fn compose_family(
    family: &[StoppingTime],
    sigma: &StoppingTime,
    space: &FilteredSpace,
) -> Result<StoppingTime, Error> {
    if family.len() != space.horizon() + 1 {
        return Err(Error::Dimension(format!(
            "family has {} entries, expected {}",
            family.len(),
            space.horizon() + 1
        )));
    }
    for (t, member) in family.iter().enumerate() {
        if !is_stopping_time(member.times(), space)? {
            return Err(Error::NotStoppingTime(format!("family[{t}] = {member}")));
        }
        if member.times().iter().any(|&s| s < t) {
            return Err(Error::Precondition(format!(
                "family[{t}] = {member} takes values below {t}"
            )));
        }
    }
    if !is_stopping_time(sigma.times(), space)? {
        return Err(Error::NotStoppingTime(format!("argument {sigma}")));
    }
    Ok(compose_unchecked(family, sigma))
}

pub(crate) fn compose_unchecked(family: &[StoppingTime], sigma: &StoppingTime) -> StoppingTime {
    StoppingTime::new_unchecked((0..sigma.len()).map(|w| family[sigma.at(w)].at(w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn binary(horizon: usize) -> FilteredSpace {
        let mut filtration = vec![vec![vec![0, 1]]];
        filtration.extend(std::iter::repeat_n(vec![vec![0], vec![1]], horizon));
        FilteredSpace::from_probabilities(horizon, vec![q(1, 2), q(1, 2)], filtration).unwrap()
    }

    #[test]
    fn stopping_time_examples() {
        let space = binary(1);
        assert!(is_stopping_time(&[1, 1], &space).unwrap());
        assert!(!is_stopping_time(&[0, 1], &space).unwrap());
        assert!(matches!(
            is_stopping_time(&[0, 2], &space),
            Err(Error::TimeOutOfRange { .. })
        ));
        let space = binary(2);
        assert!(is_stopping_time(&[1, 2], &space).unwrap());
    }

    #[test]
    fn deterministic_enumeration() {
        let set = enumerate_stopping_times(&FilteredSpace::deterministic(1), 0).unwrap();
        let times: Vec<_> = set.iter().map(|s| s.at(0)).collect();
        assert_eq!(times, vec![0, 1]);
        let set = enumerate_stopping_times(&FilteredSpace::deterministic(2), 0).unwrap();
        assert_eq!(set.iter().map(|s| s.at(0)).collect::<Vec<_>>(), vec![0, 1, 2]);
        let set = enumerate_stopping_times(&FilteredSpace::deterministic(3), 2).unwrap();
        assert_eq!(set.iter().map(|s| s.at(0)).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn binary_tree_count_and_order() {
        let space = binary(2);
        let set = enumerate_stopping_times(&space, 0).unwrap();
        assert_eq!(set.len(), 5);
        assert_eq!(count_stopping_times(&space, 0).unwrap(), 5);
        let listed: Vec<Vec<usize>> = set.iter().map(|s| s.times().to_vec()).collect();
        assert_eq!(listed, vec![vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        for (i, s) in set.iter().enumerate() {
            assert_eq!(set.index_of(s), Some(i));
        }
    }

    #[test]
    fn enumeration_cap() {
        let space = binary(2);
        let err = enumerate_stopping_times_capped(&space, 0, 4).unwrap_err();
        assert!(matches!(err, Error::EnumerationOverflow { cap: 4, .. }));
        assert!(err.to_string().contains("cap 4"));
    }

    #[test]
    fn identity_and_swap_maps_on_one_step() {
        let space = FilteredSpace::deterministic(1);
        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        let identity = StoppingStrategy::from_indices(&[0, 1], &ambient);
        assert!(!check_nonanticipativity(&identity, Kind::TypeI, &ambient));
        assert!(check_nonanticipativity(&identity, Kind::TypeII, &ambient));
        let swap = StoppingStrategy::from_indices(&[1, 0], &ambient);
        assert!(!check_nonanticipativity(&swap, Kind::TypeI, &ambient));
        assert!(check_nonanticipativity(&swap, Kind::TypeII, &ambient));
        for c in 0..2 {
            let constant = StoppingStrategy::from_indices(&[c, c], &ambient);
            assert!(check_nonanticipativity(&constant, Kind::TypeI, &ambient));
            assert!(check_nonanticipativity(&constant, Kind::TypeII, &ambient));
        }
    }

    #[test]
    fn strategy_sweeps_on_one_step() {
        let space = FilteredSpace::deterministic(1);
        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        let type_one: Vec<Vec<usize>> = enumerate_strategies(&ambient, Kind::TypeI)
            .unwrap()
            .map(|s| s.table().iter().map(|r| ambient.index_of(r).unwrap()).collect())
            .collect();
        assert_eq!(type_one, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(enumerate_strategies(&ambient, Kind::TypeII).unwrap().count(), 4);
    }

    #[test]
    fn strategy_cap_fails_before_streaming() {
        let space = FilteredSpace::deterministic(2);
        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        assert!(enumerate_strategies_capped(&ambient, Kind::TypeII, 26).is_err());
        assert!(enumerate_strategies_capped(&ambient, Kind::TypeII, 27).is_ok());
    }

    #[test]
    fn compose_examples() {
        let space = binary(2);
        let immediate: Vec<StoppingTime> = (0..=2).map(|t| StoppingTime::constant(&space, t).unwrap()).collect();
        let last: Vec<StoppingTime> = (0..=2).map(|_| StoppingTime::constant(&space, 2).unwrap()).collect();
        for sigma in enumerate_stopping_times(&space, 0).unwrap().iter() {
            assert_eq!(&compose_family(&immediate, sigma, &space).unwrap(), sigma);
            assert_eq!(compose_family(&last, sigma, &space).unwrap().times(), &[2, 2]);
        }
        let mut bad = immediate.clone();
        bad[1] = StoppingTime::new_unchecked(vec![1, 2]);
        bad[0] = StoppingTime::new_unchecked(vec![0, 1]);
        let sigma = StoppingTime::constant(&space, 0).unwrap();
        assert!(matches!(
            compose_family(&bad, &sigma, &space),
            Err(Error::NotStoppingTime(_))
        ));
        let mut below = immediate;
        below[2] = StoppingTime::constant(&space, 1).unwrap();
        assert!(matches!(
            compose_family(&below, &sigma, &space),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn apply_requires_membership() {
        let space = FilteredSpace::deterministic(1);
        let ambient = enumerate_stopping_times(&space, 0).unwrap();
        let late = enumerate_stopping_times(&space, 1).unwrap();
        let s = StoppingStrategy::constant(ambient.get(1).clone(), &late);
        assert!(matches!(s.apply(ambient.get(0), &late), Err(Error::NotInAmbient)));
        assert_eq!(s.apply(ambient.get(1), &late).unwrap().at(0), 1);
    }
}
