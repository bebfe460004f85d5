//! Monotone submodular set functions and exact oracles.
//!
//! Element ids index the ground set densely (`0..n`). Coverage and additive
//! families built from integer weights produce integer values, which `f64`
//! represents exactly; general real-valued functions are compared with
//! [`VALUE_TOLERANCE`].

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::rng::SeededRng;
use crate::stream::ElementId;
use crate::{Error, Result};

/// Comparison tolerance for real-valued functions.
pub const VALUE_TOLERANCE: f64 = 1e-9;

/// Largest number of candidate subsets [`brute_force_opt`] will evaluate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Ground sets up to this size are verified exhaustively.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 12;

/// A set function over the ground set `0..ground_size()`.
///
/// Implementations must be normalized (`eval(&[]) == 0`), monotone and
/// submodular; [`verify_axioms`] checks this. `set` never holds duplicates.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;
    fn eval(&self, set: &[ElementId]) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &[ElementId]) -> f64 {
        (**self).eval(set)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn eval(&self, set: &[ElementId]) -> f64 {
        (**self).eval(set)
    }
}

/// Evaluation handle that counts calls. One per run; never shared across
/// runs.
pub struct Oracle<'f> {
    f: &'f dyn SetFunction,
    calls: Cell<u64>,
}

impl<'f> Oracle<'f> {
    pub fn new(f: &'f dyn SetFunction) -> Self {
        Self { f, calls: Cell::new(0) }
    }

    pub fn function(&self) -> &'f dyn SetFunction {
        self.f
    }

    pub fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    pub fn eval(&self, set: &[ElementId]) -> f64 {
        self.calls.set(self.calls.get() + 1);
        self.f.eval(set)
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// `f(S + e) - f(S)`, two evaluations.
    pub fn marginal(&self, e: ElementId, set: &[ElementId]) -> Result<f64> {
        let base = self.eval(set);
        self.marginal_given(e, set, base)
    }

    /// `f(S + e) - f(S)` when `f(S)` is already known, one evaluation.
    pub fn marginal_given(&self, e: ElementId, set: &[ElementId], value_of_set: f64) -> Result<f64> {
        if set.contains(&e) {
            return Err(Error::Precondition(format!("element {e} already in the set")));
        }
        let mut with = Vec::with_capacity(set.len() + 1);
        with.extend_from_slice(set);
        with.push(e);
        Ok(self.eval(&with) - value_of_set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    members: Vec<ElementId>,
}

impl GroundSet {
    pub fn new(members: Vec<ElementId>) -> Result<Self> {
        let mut sorted = members.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance("duplicate ground-set member".into()));
        }
        Ok(Self { members })
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        Self {
            members: (0..n as u32).map(ElementId).collect(),
        }
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A feasible set with its cached value. `elements` is sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub elements: Vec<ElementId>,
    pub value: f64,
}

impl Solution {
    pub fn empty() -> Self {
        Self {
            elements: Vec::new(),
            value: 0.0,
        }
    }

    pub fn new(mut elements: Vec<ElementId>, value: f64) -> Self {
        elements.sort_unstable();
        Self { elements, value }
    }
}

/// Fixed-width bitset over a dense point universe.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(rows: &[Vec<usize>], universe: usize) -> Self {
        let words = universe.div_ceil(64).max(1);
        let mut data = vec![0u64; rows.len() * words];
        for (r, pts) in rows.iter().enumerate() {
            for &p in pts {
                data[r * words + p / 64] |= 1 << (p % 64);
            }
        }
        Self { words, data }
    }

    #[inline]
    fn union_word(&self, set: &[ElementId], w: usize) -> u64 {
        set.iter().fold(0, |acc, e| acc | self.data[e.index() * self.words + w])
    }
}

/// Coverage function: `f(S) = |⋃_{e∈S} points(e)|`, or the total weight of
/// the covered points when point weights are given.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageInstance {
    /// External point labels, indexed by dense point id.
    labels: Vec<u64>,
    rows: Vec<Vec<usize>>,
    weights: Option<Vec<f64>>,
    bits: Bits,
}

impl CoverageInstance {
    /// Unit-weight coverage. `sets[i]` lists the point labels covered by
    /// element `i`; the universe is the union of all lists.
    pub fn new(sets: Vec<Vec<u64>>) -> Self {
        Self::build(sets, None).expect("unit weights are always valid")
    }

    /// Weighted coverage. Every point label appearing in `sets` needs a
    /// non-negative weight.
    pub fn weighted(sets: Vec<Vec<u64>>, weights: &BTreeMap<u64, f64>) -> Result<Self> {
        Self::build(sets, Some(weights))
    }

    fn build(sets: Vec<Vec<u64>>, weights: Option<&BTreeMap<u64, f64>>) -> Result<Self> {
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        for s in &sets {
            for &p in s {
                index.entry(p).or_insert(0);
            }
        }
        for (i, v) in index.values_mut().enumerate() {
            *v = i;
        }
        let labels: Vec<u64> = index.keys().copied().collect();
        let rows: Vec<Vec<usize>> = sets
            .iter()
            .map(|s| {
                let mut r: Vec<usize> = s.iter().map(|p| index[p]).collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        let weights = match weights {
            None => None,
            Some(w) => {
                let mut out = Vec::with_capacity(labels.len());
                for l in &labels {
                    let x = *w
                        .get(l)
                        .ok_or_else(|| Error::InvalidInstance(format!("point {l} has no weight")))?;
                    if !(x >= 0.0 && x.is_finite()) {
                        return Err(Error::InvalidInstance(format!("point {l} has weight {x}")));
                    }
                    out.push(x);
                }
                Some(out)
            }
        };
        let bits = Bits::new(&rows, labels.len());
        Ok(Self {
            labels,
            rows,
            weights,
            bits,
        })
    }

    /// The rectangles-and-dots instance: elements A, B, C, D are ids 0..4.
    /// Dots are numbered row by row (bottom 0, 1, 2; top 3, 4, 5).
    pub fn four_rectangles() -> Self {
        Self::new(vec![
            vec![4, 5],       // A
            vec![0, 1, 3, 4], // B
            vec![1, 2],       // C
            vec![2],          // D
        ])
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    /// Point labels covered by `e`.
    pub fn points_of(&self, e: ElementId) -> Vec<u64> {
        self.rows[e.index()].iter().map(|&p| self.labels[p]).collect()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn point_weight(&self, label: u64) -> Option<f64> {
        let i = self.labels.binary_search(&label).ok()?;
        Some(self.weights.as_ref().map_or(1.0, |w| w[i]))
    }

    /// Restriction to the given elements, renumbered densely in the given
    /// order.
    pub fn restrict(&self, keep: &[ElementId]) -> Self {
        let sets = keep.iter().map(|&e| self.points_of(e)).collect();
        match &self.weights {
            None => Self::new(sets),
            Some(w) => {
                let map = self.labels.iter().copied().zip(w.iter().copied()).collect();
                Self::weighted(sets, &map).expect("weights carried over")
            }
        }
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.rows.len() {
            let rec = CoverageRecord {
                id: i as u32,
                points: self.points_of(ElementId(i as u32)),
            };
            let s = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{s}")?;
        }
        Ok(())
    }

    /// Reads `{"id": i, "points": [...]}` records; ids must be exactly
    /// `0..n` in some order.
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let mut by_id: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CoverageRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
            if by_id.insert(rec.id, rec.points).is_some() {
                return Err(Error::Parse {
                    line: n + 1,
                    msg: format!("duplicate element id {}", rec.id),
                });
            }
        }
        Self::from_id_map(by_id)
    }

    /// Builds from an id → points map whose keys must be `0..n`.
    pub fn from_id_map(by_id: BTreeMap<u32, Vec<u64>>) -> Result<Self> {
        if by_id.keys().enumerate().any(|(i, &id)| id as usize != i) {
            return Err(Error::InvalidInstance("element ids must be 0..n".into()));
        }
        Ok(Self::new(by_id.into_values().collect()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CoverageRecord {
    id: u32,
    points: Vec<u64>,
}

impl SetFunction for CoverageInstance {
    fn ground_size(&self) -> usize {
        self.rows.len()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        match &self.weights {
            None => (0..self.bits.words)
                .map(|w| self.bits.union_word(set, w).count_ones() as u64)
                .sum::<u64>() as f64,
            Some(weights) => {
                let mut total = 0.0;
                for w in 0..self.bits.words {
                    let mut word = self.bits.union_word(set, w);
                    while word != 0 {
                        let b = word.trailing_zeros() as usize;
                        total += weights[w * 64 + b];
                        word &= word - 1;
                    }
                }
                total
            }
        }
    }
}

/// `f(S) = Σ_{e∈S} w(e)` with `w ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Additive {
    weights: Vec<f64>,
}

impl Additive {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidInstance(format!("additive weight {w}")));
        }
        Ok(Self { weights })
    }

    pub fn weight(&self, e: ElementId) -> f64 {
        self.weights[e.index()]
    }
}

impl SetFunction for Additive {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        set.iter().map(|e| self.weights[e.index()]).sum()
    }
}

/// Function given by an explicit value table over bitmask-encoded subsets.
/// Unlisted subsets evaluate to 0. Mainly for counterexamples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TableFunction {
    n: usize,
    values: HashMap<u64, f64>,
}

impl TableFunction {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64);
        Self {
            n,
            values: HashMap::new(),
        }
    }

    pub fn set(&mut self, set: &[ElementId], value: f64) -> &mut Self {
        self.values.insert(mask_of(set), value);
        self
    }
}

impl SetFunction for TableFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &[ElementId]) -> f64 {
        self.values.get(&mask_of(set)).copied().unwrap_or(0.0)
    }
}

fn mask_of(set: &[ElementId]) -> u64 {
    set.iter().fold(0u64, |m, e| m | (1 << e.0))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Exact optimum over subsets of `ground` with at most `k` elements.
///
/// Subsets are visited in lexicographic order of their sorted id lists and
/// only a strictly better value (beyond [`VALUE_TOLERANCE`]) replaces the
/// incumbent, so ties go to the lexicographically smallest subset.
pub fn brute_force_opt(oracle: &Oracle<'_>, ground: &GroundSet, k: usize) -> Result<Solution> {
    let n = ground.len();
    let count: u128 = (0..=k.min(n)).map(|i| binomial(n, i)).sum();
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            what: "candidate subsets",
            actual: count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut members = ground.members().to_vec();
    members.sort_unstable();
    let mut best = Solution::empty();
    let mut cur = Vec::with_capacity(k);
    fn walk(
        oracle: &Oracle<'_>,
        members: &[ElementId],
        start: usize,
        k: usize,
        cur: &mut Vec<ElementId>,
        best: &mut Solution,
    ) {
        if !cur.is_empty() {
            let v = oracle.eval(cur);
            if v > best.value + VALUE_TOLERANCE {
                *best = Solution::new(cur.clone(), v);
            }
        }
        if cur.len() == k {
            return;
        }
        for i in start..members.len() {
            cur.push(members[i]);
            walk(oracle, members, i + 1, k, cur, best);
            cur.pop();
        }
    }
    walk(oracle, &members, 0, k, &mut cur, &mut best);
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// `f(∅) ≠ 0`.
    NotNormalized { value: f64 },
    /// `f(small) > f(large)` with `small ⊆ large`.
    NotMonotone {
        small: Vec<ElementId>,
        large: Vec<ElementId>,
    },
    /// `f(S) + f(T) < f(S∪T) + f(S∩T)`.
    NotSubmodular { s: Vec<ElementId>, t: Vec<ElementId> },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    /// Pairs (or local configurations) examined.
    pub checked: u64,
    pub exhaustive: bool,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn from_mask(mask: u64, ids: &[ElementId]) -> Vec<ElementId> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

/// Checks normalization, monotonicity and submodularity.
///
/// Ground sets of at most [`EXHAUSTIVE_AXIOM_LIMIT`] members are checked
/// exhaustively via the local conditions `f(S+a) ≥ f(S)` and
/// `f(S+a) + f(S+b) ≥ f(S+a+b) + f(S)` over all `S` and `a, b ∉ S`, which
/// together are equivalent to the global axioms. Larger ground sets are
/// checked on `samples` random pairs drawn from `seed`.
pub fn verify_axioms(oracle: &Oracle<'_>, ground: &GroundSet, samples: usize, seed: u64) -> AxiomReport {
    let ids = ground.members();
    let n = ids.len();
    let mut report = AxiomReport::default();
    let empty = oracle.eval(&[]);
    if empty.abs() > VALUE_TOLERANCE {
        report.violations.push(AxiomViolation::NotNormalized { value: empty });
    }
    if n <= EXHAUSTIVE_AXIOM_LIMIT {
        report.exhaustive = true;
        let table: Vec<f64> = (0..1u64 << n).map(|m| oracle.eval(&from_mask(m, ids))).collect();
        for s in 0..1u64 << n {
            for a in (0..n).filter(|a| s >> a & 1 == 0) {
                let sa = s | 1 << a;
                report.checked += 1;
                if table[sa as usize] < table[s as usize] - VALUE_TOLERANCE {
                    report.violations.push(AxiomViolation::NotMonotone {
                        small: from_mask(s, ids),
                        large: from_mask(sa, ids),
                    });
                }
                for b in (a + 1..n).filter(|b| s >> b & 1 == 0) {
                    let sb = s | 1 << b;
                    let sab = sa | 1 << b;
                    report.checked += 1;
                    let lhs = table[sa as usize] + table[sb as usize];
                    let rhs = table[sab as usize] + table[s as usize];
                    if lhs < rhs - VALUE_TOLERANCE {
                        report.violations.push(AxiomViolation::NotSubmodular {
                            s: from_mask(sa, ids),
                            t: from_mask(sb, ids),
                        });
                    }
                }
            }
        }
    } else {
        let mut rng = SeededRng::new(seed);
        for _ in 0..samples {
            let mut s = Vec::new();
            let mut t = Vec::new();
            let mut union = Vec::new();
            let mut inter = Vec::new();
            for &e in ids {
                let (in_s, in_t) = (rng.chance(0.5), rng.chance(0.5));
                if in_s {
                    s.push(e);
                }
                if in_t {
                    t.push(e);
                }
                if in_s || in_t {
                    union.push(e);
                }
                if in_s && in_t {
                    inter.push(e);
                }
            }
            report.checked += 1;
            let (fs, ft) = (oracle.eval(&s), oracle.eval(&t));
            let (fu, fi) = (oracle.eval(&union), oracle.eval(&inter));
            if fs + ft < fu + fi - VALUE_TOLERANCE {
                report.violations.push(AxiomViolation::NotSubmodular {
                    s: s.clone(),
                    t: t.clone(),
                });
            }
            if fi > fs + VALUE_TOLERANCE {
                report
                    .violations
                    .push(AxiomViolation::NotMonotone { small: inter, large: s });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: ElementId = ElementId(0);
    const B: ElementId = ElementId(1);
    const C: ElementId = ElementId(2);
    const D: ElementId = ElementId(3);

    #[test]
    fn four_rectangles_marginals() {
        let f = CoverageInstance::four_rectangles();
        let o = Oracle::new(&f);
        assert_eq!(o.marginal(B, &[A]).unwrap(), 3.0);
        assert_eq!(o.marginal(C, &[B]).unwrap(), 1.0);
        assert_eq!(o.marginal(D, &[]).unwrap(), o.eval(&[D]));
        assert_eq!(f.eval(&[A, B, C, D]), 6.0);
    }

    #[test]
    fn marginal_rejects_members() {
        let f = CoverageInstance::four_rectangles();
        let o = Oracle::new(&f);
        assert!(matches!(o.marginal(A, &[A, B]), Err(Error::Precondition(_))));
    }

    #[test]
    fn marginal_call_counts() {
        let f = CoverageInstance::four_rectangles();
        let o = Oracle::new(&f);
        o.marginal(B, &[A]).unwrap();
        assert_eq!(o.calls(), 2);
        o.marginal_given(C, &[A], 2.0).unwrap();
        assert_eq!(o.calls(), 3);
    }

    #[test]
    fn four_rectangles_optimum() {
        let f = CoverageInstance::four_rectangles();
        let o = Oracle::new(&f);
        let best = brute_force_opt(&o, &GroundSet::full(4), 2).unwrap();
        assert_eq!(best.value, 5.0);
        assert_eq!(best.elements, vec![A, B]);
        let none = brute_force_opt(&o, &GroundSet::full(4), 0).unwrap();
        assert_eq!(none, Solution::empty());
    }

    #[test]
    fn brute_force_guard() {
        let f = Additive::new(vec![1.0; 60]).unwrap();
        let o = Oracle::new(&f);
        assert!(matches!(
            brute_force_opt(&o, &GroundSet::full(60), 10),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn weighted_coverage_sums_covered_weights() {
        let w: BTreeMap<u64, f64> = [(10, 0.5), (20, 1.25), (30, 2.0)].into_iter().collect();
        let f = CoverageInstance::weighted(vec![vec![10, 20], vec![20, 30]], &w).unwrap();
        assert_eq!(f.eval(&[A]), 1.75);
        assert_eq!(f.eval(&[A, B]), 3.75);
        assert!(CoverageInstance::weighted(vec![vec![99]], &w).is_err());
    }

    #[test]
    fn large_universe_spans_words() {
        let f = CoverageInstance::new(vec![(0..100).collect(), (50..200).collect()]);
        assert_eq!(f.universe_size(), 200);
        assert_eq!(f.eval(&[A, B]), 200.0);
        assert_eq!(f.eval(&[B]), 150.0);
    }

    #[test]
    fn axioms_hold_for_shipped_families() {
        let f = CoverageInstance::four_rectangles();
        assert!(verify_axioms(&Oracle::new(&f), &GroundSet::full(4), 0, 0).is_clean());
        let a = Additive::new(vec![1.0, 0.0, 2.5, 7.0]).unwrap();
        assert!(verify_axioms(&Oracle::new(&a), &GroundSet::full(4), 0, 0).is_clean());
    }

    #[test]
    fn supermodular_counterexample_is_reported() {
        let mut f = TableFunction::new(2);
        f.set(&[A], 1.0).set(&[B], 1.0).set(&[A, B], 3.0);
        let r = verify_axioms(&Oracle::new(&f), &GroundSet::full(2), 0, 0);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::NotSubmodular { .. })));
    }

    #[test]
    fn non_normalized_and_non_monotone_are_reported() {
        let mut f = TableFunction::new(2);
        f.set(&[], 1.0).set(&[A], 2.0).set(&[B], 2.0).set(&[A, B], 1.5);
        let r = verify_axioms(&Oracle::new(&f), &GroundSet::full(2), 0, 0);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::NotNormalized { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::NotMonotone { .. })));
    }

    #[test]
    fn sampled_mode_for_large_ground_sets() {
        let sets = (0..20u64).map(|i| vec![i, i + 1, i + 2]).collect();
        let f = CoverageInstance::new(sets);
        let r = verify_axioms(&Oracle::new(&f), &GroundSet::full(20), 200, 1);
        assert!(!r.exhaustive);
        assert_eq!(r.checked, 200);
        assert!(r.is_clean());
    }

    #[test]
    fn coverage_file_round_trip() {
        let f = CoverageInstance::four_rectangles();
        let mut buf = Vec::new();
        f.write_jsonl(&mut buf).unwrap();
        let g = CoverageInstance::read_jsonl(buf.as_slice()).unwrap();
        for m in 0..16u64 {
            let s = from_mask(m, GroundSet::full(4).members());
            assert_eq!(f.eval(&s), g.eval(&s));
        }
    }

    #[test]
    fn coverage_file_requires_dense_ids() {
        let text = "{\"id\":0,\"points\":[1]}\n{\"id\":2,\"points\":[1]}\n";
        assert!(CoverageInstance::read_jsonl(text.as_bytes()).is_err());
    }

    #[test]
    fn restrict_renumbers() {
        let f = CoverageInstance::four_rectangles();
        let g = f.restrict(&[C, A]);
        assert_eq!(g.ground_size(), 2);
        assert_eq!(g.eval(&[ElementId(0)]), 2.0);
        assert_eq!(g.eval(&[ElementId(0), ElementId(1)]), 4.0);
    }
}
