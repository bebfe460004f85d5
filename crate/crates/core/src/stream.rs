//! The adversarial-injections input model.
//!
//! An instance is split into good elements, which the model permutes
//! uniformly at random, and noise elements, which an adversary injects at
//! slots chosen without seeing that permutation. Slot `i` means "before the
//! `(i+1)`-th good element of the realized order"; slot `|good|` is the end
//! of the stream. Noise sharing a slot keeps the plan's list order.
//!
//! Algorithms consume an [`InjectedStream`] through [`InjectedStream::elements`],
//! which carries no good/noise labels. The realized permutation is kept on
//! the stream for oracles and tests only.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::rng::{shuffle_with, SeededRng, UniformSource};
use crate::{Error, Result};

/// Largest good set [`enumerate_streams`] accepts (8! = 40320 streams).
pub const MAX_ENUMERATED_GOOD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for ElementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A stream element. The payload is whatever the problem attaches to an
/// id: nothing for submodular ground-set members, an edge for matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element<P> {
    pub id: ElementId,
    pub payload: P,
}

impl<P> Element<P> {
    pub fn new(id: ElementId, payload: P) -> Self {
        Self { id, payload }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Good,
    Noise,
}

/// Good/noise partition of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSplit<P> {
    good: Vec<Element<P>>,
    noise: Vec<Element<P>>,
}

impl<P> InstanceSplit<P> {
    /// Fails if ids repeat, within or across the two sets.
    pub fn new(good: Vec<Element<P>>, noise: Vec<Element<P>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(good.len() + noise.len());
        for e in good.iter().chain(noise.iter()) {
            if !seen.insert(e.id) {
                return Err(Error::InvalidInstance(format!("duplicate element id {}", e.id)));
            }
        }
        Ok(Self { good, noise })
    }

    pub fn good(&self) -> &[Element<P>] {
        &self.good
    }

    pub fn noise(&self) -> &[Element<P>] {
        &self.noise
    }

    pub fn len(&self) -> usize {
        self.good.len() + self.noise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn noise_ids(&self) -> Vec<ElementId> {
        self.noise.iter().map(|e| e.id).collect()
    }

    pub fn good_ids(&self) -> Vec<ElementId> {
        self.good.iter().map(|e| e.id).collect()
    }

    pub fn role_of(&self, id: ElementId) -> Option<Role> {
        if self.good.iter().any(|e| e.id == id) {
            Some(Role::Good)
        } else if self.noise.iter().any(|e| e.id == id) {
            Some(Role::Noise)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Injection {
    pub slot: usize,
    pub noise: ElementId,
}

/// Where each noise element goes. List order is the within-slot order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InjectionPlan {
    entries: Vec<Injection>,
}

impl InjectionPlan {
    pub fn new(entries: Vec<Injection>) -> Self {
        Self { entries }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// All of `noise`, in list order, at one slot.
    pub fn all_at(slot: usize, noise: &[ElementId]) -> Self {
        Self::new(noise.iter().map(|&id| Injection { slot, noise: id }).collect())
    }

    pub fn entries(&self) -> &[Injection] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that the plan injects every noise element of `split` exactly
    /// once and only uses slots `0..=|good|`.
    pub fn validate<P>(&self, split: &InstanceSplit<P>) -> Result<()> {
        let noise: HashSet<ElementId> = split.noise.iter().map(|e| e.id).collect();
        let mut used = HashSet::with_capacity(self.entries.len());
        for inj in &self.entries {
            if inj.slot > split.good.len() {
                return Err(Error::InvalidPlan(format!(
                    "slot {} out of range 0..={}",
                    inj.slot,
                    split.good.len()
                )));
            }
            if !noise.contains(&inj.noise) {
                return Err(Error::InvalidPlan(format!("unknown noise element {}", inj.noise)));
            }
            if !used.insert(inj.noise) {
                return Err(Error::InvalidPlan(format!(
                    "noise element {} injected twice",
                    inj.noise
                )));
            }
        }
        if used.len() != noise.len() {
            return Err(Error::InvalidPlan(format!(
                "{} of {} noise elements not injected",
                noise.len() - used.len(),
                noise.len()
            )));
        }
        Ok(())
    }
}

/// A realized stream.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectedStream<P> {
    order: Vec<Element<P>>,
    permutation: Vec<ElementId>,
    seed: u64,
}

impl<P> InjectedStream<P> {
    /// Algorithm-facing view: elements in arrival order, unlabeled.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = &Element<P>> + Clone + '_ {
        self.order.iter()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn ids(&self) -> Vec<ElementId> {
        self.order.iter().map(|e| e.id).collect()
    }

    /// Realized order of the good elements. For oracles and tests.
    pub fn permutation(&self) -> &[ElementId] {
        &self.permutation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream positions of the good elements, in permutation order.
    pub fn good_positions(&self) -> Vec<usize> {
        let good: HashSet<ElementId> = self.permutation.iter().copied().collect();
        self.order
            .iter()
            .enumerate()
            .filter(|(_, e)| good.contains(&e.id))
            .map(|(i, _)| i)
            .collect()
    }

    /// Stream made of the first `len` elements.
    pub fn prefix(&self, len: usize) -> Self
    where
        P: Clone,
    {
        let order: Vec<Element<P>> = self.order[..len.min(self.order.len())].to_vec();
        let kept: HashSet<ElementId> = order.iter().map(|e| e.id).collect();
        let permutation = self
            .permutation
            .iter()
            .copied()
            .filter(|id| kept.contains(id))
            .collect();
        Self {
            order,
            permutation,
            seed: self.seed,
        }
    }
}

impl<P: Clone> InjectedStream<P> {
    /// A stream in exactly the given order with every element treated as
    /// good. Used for plain arrival-order input files.
    pub fn from_order(order: Vec<Element<P>>) -> Self {
        let permutation = order.iter().map(|e| e.id).collect();
        Self {
            order,
            permutation,
            seed: 0,
        }
    }
}

/// Uniform permutation of `good` under the seeded generator.
pub fn sample_permutation<P: Clone>(good: &[Element<P>], seed: u64) -> Result<Vec<Element<P>>> {
    sample_permutation_with(good, &mut SeededRng::new(seed))
}

/// [`sample_permutation`] driven by an arbitrary source of uniform draws.
pub fn sample_permutation_with<P: Clone, S: UniformSource + ?Sized>(
    good: &[Element<P>],
    source: &mut S,
) -> Result<Vec<Element<P>>> {
    if good.is_empty() {
        return Err(Error::InvalidInstance("good set is empty".into()));
    }
    let mut out = good.to_vec();
    shuffle_with(source, &mut out);
    Ok(out)
}

/// Interleaves `plan`'s noise into an already permuted good sequence.
pub fn realize<P: Clone>(
    split: &InstanceSplit<P>,
    plan: &InjectionPlan,
    permuted_good: Vec<Element<P>>,
    seed: u64,
) -> Result<InjectedStream<P>> {
    plan.validate(split)?;
    let g = permuted_good.len();
    let noise: HashMap<ElementId, &Element<P>> = split.noise.iter().map(|e| (e.id, e)).collect();
    let mut by_slot: Vec<Vec<ElementId>> = vec![Vec::new(); g + 1];
    for inj in plan.entries() {
        by_slot[inj.slot].push(inj.noise);
    }
    let permutation: Vec<ElementId> = permuted_good.iter().map(|e| e.id).collect();
    let mut order = Vec::with_capacity(split.len());
    let mut good_iter = permuted_good.into_iter();
    for slot in by_slot {
        order.extend(slot.into_iter().map(|id| noise[&id].clone()));
        if let Some(e) = good_iter.next() {
            order.push(e);
        }
    }
    Ok(InjectedStream {
        order,
        permutation,
        seed,
    })
}

/// Samples the good permutation from `seed` and injects `plan`.
pub fn build_stream<P: Clone>(split: &InstanceSplit<P>, plan: &InjectionPlan, seed: u64) -> Result<InjectedStream<P>> {
    plan.validate(split)?;
    let permuted = if split.good.is_empty() {
        Vec::new()
    } else {
        sample_permutation(&split.good, seed)?
    };
    realize(split, plan, permuted, seed)
}

/// One stream per permutation of the good set, in lexicographic order of
/// positions in `split.good()`. The seed field holds the permutation index.
pub fn enumerate_streams<P: Clone>(split: &InstanceSplit<P>, plan: &InjectionPlan) -> Result<Vec<InjectedStream<P>>> {
    let g = split.good.len();
    if g > MAX_ENUMERATED_GOOD {
        return Err(Error::SizeLimit {
            what: "good set size",
            actual: g as u128,
            limit: MAX_ENUMERATED_GOOD as u128,
        });
    }
    plan.validate(split)?;
    let mut out = Vec::new();
    for (i, perm) in permutations(g).into_iter().enumerate() {
        let permuted = perm.iter().map(|&j| split.good[j].clone()).collect();
        out.push(realize(split, plan, permuted, i as u64)?);
    }
    Ok(out)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Record<P> {
    Element { id: u32, role: Role, payload: P },
    Plan { slots: Vec<(usize, u32)> },
}

/// Writes the line-delimited instance format: one JSON object per element
/// `{"id", "role", "payload"}`, then one `{"slots": [[slot, noise_id], ...]}`.
pub fn write_instance<P: Serialize + Clone, W: Write>(
    mut out: W,
    split: &InstanceSplit<P>,
    plan: &InjectionPlan,
) -> Result<()> {
    let mut line = |r: &Record<P>| -> Result<()> {
        let s = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{s}")?;
        Ok(())
    };
    for (role, set) in [(Role::Good, &split.good), (Role::Noise, &split.noise)] {
        for e in set {
            line(&Record::Element {
                id: e.id.0,
                role,
                payload: e.payload.clone(),
            })?;
        }
    }
    line(&Record::Plan {
        slots: plan.entries().iter().map(|i| (i.slot, i.noise.0)).collect(),
    })
}

/// Reads the format produced by [`write_instance`]. A missing plan record
/// means an empty plan; blank lines are ignored.
pub fn read_instance<P: DeserializeOwned, R: BufRead>(input: R) -> Result<(InstanceSplit<P>, InjectionPlan)> {
    let mut good = Vec::new();
    let mut noise = Vec::new();
    let mut plan = None;
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record<P> = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: n + 1,
            msg: e.to_string(),
        })?;
        match rec {
            Record::Element { id, role, payload } => {
                let e = Element::new(ElementId(id), payload);
                match role {
                    Role::Good => good.push(e),
                    Role::Noise => noise.push(e),
                }
            }
            Record::Plan { slots } => {
                if plan.is_some() {
                    return Err(Error::Parse {
                        line: n + 1,
                        msg: "second plan record".into(),
                    });
                }
                plan = Some(InjectionPlan::new(
                    slots
                        .into_iter()
                        .map(|(slot, id)| Injection {
                            slot,
                            noise: ElementId(id),
                        })
                        .collect(),
                ));
            }
        }
    }
    let split = InstanceSplit::new(good, noise)?;
    let plan = plan.unwrap_or_default();
    plan.validate(&split)?;
    Ok((split, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::FactorialCounter;

    fn elems(ids: &[u32]) -> Vec<Element<()>> {
        ids.iter().map(|&i| Element::new(ElementId(i), ())).collect()
    }

    fn ids<P>(s: &InjectedStream<P>) -> Vec<u32> {
        s.elements().map(|e| e.id.0).collect()
    }

    #[test]
    fn single_element_permutation_is_fixed() {
        for seed in 0..20 {
            let p = sample_permutation(&elems(&[4]), seed).unwrap();
            assert_eq!(p[0].id, ElementId(4));
        }
    }

    #[test]
    fn empty_good_is_rejected() {
        assert!(matches!(
            sample_permutation::<()>(&[], 1),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn two_element_orders_are_balanced() {
        let good = elems(&[0, 1]);
        let trials = 10_000;
        let flipped = (0..trials)
            .filter(|&s| sample_permutation(&good, s).unwrap()[0].id == ElementId(1))
            .count();
        let freq = flipped as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn counter_source_enumerates_three_element_orders() {
        let good = elems(&[0, 1, 2]);
        let mut seen = HashSet::new();
        for c in 0..6u128 {
            let p = sample_permutation_with(&good, &mut FactorialCounter::new(c)).unwrap();
            seen.insert(p.iter().map(|e| e.id.0).collect::<Vec<_>>());
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn no_noise_gives_the_permutation() {
        let split = InstanceSplit::new(elems(&[0, 1, 2, 3]), vec![]).unwrap();
        let s = build_stream(&split, &InjectionPlan::empty(), 9).unwrap();
        assert_eq!(s.ids(), s.permutation().to_vec());
    }

    #[test]
    fn slot_zero_goes_first() {
        let split = InstanceSplit::new(elems(&[0, 1]), elems(&[9])).unwrap();
        let plan = InjectionPlan::all_at(0, &[ElementId(9)]);
        let s = realize(&split, &plan, elems(&[1, 0]), 0).unwrap();
        assert_eq!(ids(&s), vec![9, 1, 0]);
    }

    #[test]
    fn shared_slot_keeps_list_order() {
        let split = InstanceSplit::new(elems(&[0, 1]), elems(&[8, 9])).unwrap();
        let plan = InjectionPlan::all_at(1, &[ElementId(8), ElementId(9)]);
        let s = build_stream(&split, &plan, 5).unwrap();
        let o = ids(&s);
        assert_eq!(&o[1..3], &[8, 9]);
        assert_eq!(
            vec![o[0], o[3]],
            s.permutation().iter().map(|e| e.0).collect::<Vec<_>>()
        );
    }

    #[test]
    fn plan_validation_errors() {
        let split = InstanceSplit::new(elems(&[0, 1]), elems(&[9])).unwrap();
        let out_of_range = InjectionPlan::all_at(3, &[ElementId(9)]);
        assert!(matches!(out_of_range.validate(&split), Err(Error::InvalidPlan(_))));
        let unknown = InjectionPlan::all_at(0, &[ElementId(9), ElementId(7)]);
        assert!(matches!(unknown.validate(&split), Err(Error::InvalidPlan(_))));
        let missing = InjectionPlan::empty();
        assert!(matches!(missing.validate(&split), Err(Error::InvalidPlan(_))));
        let twice = InjectionPlan::all_at(0, &[ElementId(9), ElementId(9)]);
        assert!(twice.validate(&split).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(InstanceSplit::new(elems(&[0, 1]), elems(&[1])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let split = InstanceSplit::new(elems(&[0, 1, 2]), vec![]).unwrap();
        assert_eq!(enumerate_streams(&split, &InjectionPlan::empty()).unwrap().len(), 6);

        let split = InstanceSplit::new(elems(&[0]), elems(&[1, 2, 3, 4, 5])).unwrap();
        let plan = InjectionPlan::all_at(1, &split.noise_ids());
        assert_eq!(enumerate_streams(&split, &plan).unwrap().len(), 1);

        let split = InstanceSplit::new(elems(&[0, 1, 2, 3]), vec![]).unwrap();
        let all = enumerate_streams(&split, &InjectionPlan::empty()).unwrap();
        let distinct: HashSet<Vec<u32>> = all.iter().map(ids).collect();
        assert_eq!(distinct.len(), 24);
    }

    #[test]
    fn enumeration_size_guard() {
        let split = InstanceSplit::new(elems(&[0, 1, 2, 3, 4, 5, 6, 7, 8]), vec![]).unwrap();
        assert!(matches!(
            enumerate_streams(&split, &InjectionPlan::empty()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn instance_file_round_trip() {
        let good = vec![
            Element::new(ElementId(0), vec![1u64, 2]),
            Element::new(ElementId(1), vec![3]),
        ];
        let noise = vec![Element::new(ElementId(5), vec![2u64])];
        let split = InstanceSplit::new(good, noise).unwrap();
        let plan = InjectionPlan::all_at(2, &[ElementId(5)]);
        let mut buf = Vec::new();
        write_instance(&mut buf, &split, &plan).unwrap();
        let (s2, p2) = read_instance::<Vec<u64>, _>(buf.as_slice()).unwrap();
        assert_eq!(s2, split);
        assert_eq!(p2, plan);
    }

    #[test]
    fn malformed_line_reports_position() {
        let text = "{\"id\":0,\"role\":\"good\",\"payload\":[1]}\nnot json\n";
        match read_instance::<Vec<u64>, _>(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prefix_keeps_relative_order() {
        let split = InstanceSplit::new(elems(&[0, 1, 2]), elems(&[7])).unwrap();
        let plan = InjectionPlan::all_at(1, &[ElementId(7)]);
        let s = build_stream(&split, &plan, 3).unwrap();
        let p = s.prefix(2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.permutation().len(), 1);
    }
}
