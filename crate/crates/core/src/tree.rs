//! Prefix-tree streaming algorithm for monotone submodular maximization
//! under a cardinality constraint `k`.
//!
//! The tree starts as a bare root (the empty solution). Each arriving
//! element `e` is offered to every node that existed before `e` arrived:
//! if the node sits at depth `< k` and has no child whose increase falls in
//! the same class as `f(e | S)`, where `S` is the node's root path, `e` is
//! appended there as a new child. After the stream, the best node on any
//! path is the answer.
//!
//! Increases are classified either exactly ([`GainKeying::Exact`]) or by
//! bucket ([`GainKeying::Bucketed`]): with an OPT guess `g`, the range
//! `[0, g]` is cut into `⌈k/δ⌉` buckets of width `δ·g/k`, plus one clamp
//! bucket for increases beyond `g`. Bucketing bounds the branching factor,
//! so the node count depends only on `k` and `δ` ([`node_count_bound`]).
//!
//! When OPT is unknown, [`GuessManager`] runs one bucketed tree per guess
//! `g = (1+δ)^j` inside the window `[m/(1+δ), k·m/δ]`, where `m` is the
//! largest singleton value seen so far.

use std::collections::BTreeMap;

use crate::stream::{Element, ElementId, InjectedStream};
use crate::submodular::{Oracle, Solution, VALUE_TOLERANCE};
use crate::{Error, Result};

/// Bucketing of marginal increases for one OPT guess.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncreaseBuckets {
    guess: f64,
    k: usize,
    delta: f64,
    width: f64,
    count: usize,
}

impl IncreaseBuckets {
    pub fn new(guess: f64, k: usize, delta: f64) -> Result<Self> {
        if !(guess > 0.0 && guess.is_finite()) {
            return Err(Error::Precondition(format!("guess must be positive, got {guess}")));
        }
        if k == 0 {
            return Err(Error::Precondition("bucketing needs k >= 1".into()));
        }
        check_delta(delta, true)?;
        Ok(Self {
            guess,
            k,
            delta,
            width: delta * guess / k as f64,
            count: bucket_count(k, delta),
        })
    }

    pub fn guess(&self) -> f64 {
        self.guess
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Number of regular buckets, `⌈k/δ⌉`. Index `count()` is the clamp
    /// bucket.
    pub fn count(&self) -> usize {
        self.count
    }

    /// `min(⌊x/width⌋, count)`; non-positive increases land in bucket 0.
    pub fn index(&self, increase: f64) -> usize {
        if increase <= 0.0 {
            return 0;
        }
        let raw = (increase / self.width).floor();
        if raw >= self.count as f64 {
            self.count
        } else {
            raw as usize
        }
    }
}

fn bucket_count(k: usize, delta: f64) -> usize {
    // Round k/δ before taking the ceiling so that e.g. 3/0.2 = 15.000000000000002
    // counts as 15.
    let q = k as f64 / delta;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as usize
    } else {
        q.ceil() as usize
    }
}

fn check_delta(delta: f64, allow_one: bool) -> Result<()> {
    let ok = delta > 0.0 && (delta < 1.0 || (allow_one && delta == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("delta must lie in (0,1), got {delta}")))
    }
}

/// How increases are compared when deduplicating siblings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainKeying {
    /// Equal increases (up to [`VALUE_TOLERANCE`]) share a child slot.
    Exact,
    Bucketed(IncreaseBuckets),
}

impl GainKeying {
    pub fn key(&self, increase: f64) -> i64 {
        match self {
            GainKeying::Exact => (increase.max(0.0) / VALUE_TOLERANCE).round() as i64,
            GainKeying::Bucketed(b) => b.index(increase) as i64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeConfig {
    pub k: usize,
    pub keying: GainKeying,
    /// Skip children whose increase is zero. Off by default.
    pub prune_zero_gain: bool,
}

impl TreeConfig {
    pub fn exact(k: usize) -> Self {
        Self {
            k,
            keying: GainKeying::Exact,
            prune_zero_gain: false,
        }
    }

    pub fn bucketed(k: usize, delta: f64, guess: f64) -> Result<Self> {
        Ok(Self {
            k,
            keying: GainKeying::Bucketed(IncreaseBuckets::new(guess, k, delta)?),
            prune_zero_gain: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);
}

#[derive(Debug, Clone)]
struct Node {
    element: Option<ElementId>,
    parent: NodeId,
    depth: usize,
    value: f64,
    increase: f64,
    key: i64,
    children: Vec<(i64, NodeId)>,
}

/// Read-only view of a tree node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeView {
    pub id: NodeId,
    pub element: Option<ElementId>,
    pub parent: Option<NodeId>,
    pub depth: usize,
    /// `f` of the root path, cached at creation.
    pub value: f64,
    /// Increase over the parent's value when the node was created.
    pub increase: f64,
    pub key: i64,
}

/// The solution tree. Nodes live in creation order; node 0 is the root.
#[derive(Debug, Clone)]
pub struct PrefixTree {
    config: TreeConfig,
    nodes: Vec<Node>,
    path_buf: Vec<ElementId>,
}

impl PrefixTree {
    pub fn new(config: TreeConfig) -> Self {
        Self {
            config,
            nodes: vec![Node {
                element: None,
                parent: NodeId::ROOT,
                depth: 0,
                value: 0.0,
                increase: 0.0,
                key: 0,
                children: Vec::new(),
            }],
            path_buf: Vec::with_capacity(config.k + 1),
        }
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn live_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn node(&self, id: NodeId) -> NodeView {
        let n = &self.nodes[id.0 as usize];
        NodeView {
            id,
            element: n.element,
            parent: (id != NodeId::ROOT).then_some(n.parent),
            depth: n.depth,
            value: n.value,
            increase: n.increase,
            key: n.key,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeView> + '_ {
        (0..self.nodes.len() as u32).map(move |i| self.node(NodeId(i)))
    }

    /// Children in creation order.
    pub fn children(&self, id: NodeId) -> Vec<NodeView> {
        self.nodes[id.0 as usize]
            .children
            .iter()
            .map(|&(_, c)| self.node(c))
            .collect()
    }

    /// Elements on the root path of `id`, root first.
    pub fn path(&self, id: NodeId) -> Vec<ElementId> {
        let mut out = Vec::new();
        self.collect_path(id, &mut out);
        out
    }

    fn collect_path(&self, id: NodeId, out: &mut Vec<ElementId>) {
        out.clear();
        let mut cur = id;
        while cur != NodeId::ROOT {
            let n = &self.nodes[cur.0 as usize];
            out.push(n.element.expect("non-root node holds an element"));
            cur = n.parent;
        }
        out.reverse();
    }

    /// Node reached by following `elements` from the root, if that path
    /// exists.
    pub fn find_path(&self, elements: &[ElementId]) -> Option<NodeId> {
        let mut cur = NodeId::ROOT;
        for &e in elements {
            cur = self.nodes[cur.0 as usize]
                .children
                .iter()
                .map(|&(_, c)| c)
                .find(|c| self.nodes[c.0 as usize].element == Some(e))?;
        }
        Some(cur)
    }

    /// Offers `e` to every node that existed before this call.
    ///
    /// An element already on a node's path is not appended there again.
    pub fn process(&mut self, e: ElementId, oracle: &Oracle<'_>) {
        let snapshot = self.nodes.len();
        let mut path = std::mem::take(&mut self.path_buf);
        for idx in 0..snapshot {
            let (depth, base) = {
                let n = &self.nodes[idx];
                (n.depth, n.value)
            };
            if depth >= self.config.k {
                continue;
            }
            self.collect_path(NodeId(idx as u32), &mut path);
            if path.contains(&e) {
                continue;
            }
            path.push(e);
            let value = oracle.eval(&path);
            let increase = value - base;
            if self.config.prune_zero_gain && increase <= VALUE_TOLERANCE {
                continue;
            }
            let key = self.config.keying.key(increase);
            if self.nodes[idx].children.iter().any(|&(k, _)| k == key) {
                continue;
            }
            let id = NodeId(self.nodes.len() as u32);
            self.nodes[idx].children.push((key, id));
            self.nodes.push(Node {
                element: Some(e),
                parent: NodeId(idx as u32),
                depth: depth + 1,
                value,
                increase,
                key,
                children: Vec::new(),
            });
        }
        self.path_buf = path;
    }

    /// Best node over all nodes; ties go to the earliest-created node. The
    /// bare root yields `(∅, 0)`.
    pub fn best_node(&self) -> NodeId {
        let mut best = NodeId::ROOT;
        let mut best_value = self.nodes[0].value;
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            if n.value > best_value + VALUE_TOLERANCE {
                best = NodeId(i as u32);
                best_value = n.value;
            }
        }
        best
    }

    pub fn best_solution(&self) -> Solution {
        let id = self.best_node();
        Solution::new(self.path(id), self.nodes[id.0 as usize].value)
    }
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub solution: Solution,
    /// Peak number of stored nodes, summed over live trees.
    pub nodes_live_max: usize,
    pub oracle_calls: u64,
    /// Peak number of simultaneously live guesses (1 for a known-OPT run).
    pub live_guesses_max: usize,
}

/// Runs a single tree over the stream.
pub fn tree_run<'a, P: 'a>(
    elements: impl IntoIterator<Item = &'a Element<P>>,
    config: TreeConfig,
    oracle: &Oracle<'_>,
) -> (PrefixTree, RunOutcome) {
    let start = oracle.calls();
    let mut tree = PrefixTree::new(config);
    for e in elements {
        tree.process(e.id, oracle);
    }
    let outcome = RunOutcome {
        solution: tree.best_solution(),
        nodes_live_max: tree.live_nodes(),
        oracle_calls: oracle.calls() - start,
        live_guesses_max: 1,
    };
    (tree, outcome)
}

/// `Σ_{i=0..k} (⌈k/δ⌉ + 2)^i`, an upper bound on the nodes of a bucketed
/// tree of height `k`, independent of the stream length.
pub fn node_count_bound(k: usize, delta: f64) -> Result<u128> {
    check_delta(delta, true)?;
    if k == 0 {
        return Ok(1);
    }
    let branch = bucket_count(k, delta) as u128 + 2;
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..=k {
        total = total.saturating_add(term);
        term = term.saturating_mul(branch);
    }
    Ok(total)
}

/// Exponents `j` with `m/(1+δ) ≤ (1+δ)^j ≤ k·m/δ`. Empty while `m = 0`.
pub fn guess_window(m: f64, k: usize, delta: f64) -> Option<(i32, i32)> {
    if m <= 0.0 || k == 0 {
        return None;
    }
    let base = 1.0 + delta;
    let lo = m / base;
    let hi = k as f64 * m / delta;
    let slack = 1e-12;
    let mut j_lo = (lo.ln() / base.ln()).ceil() as i32;
    while base.powi(j_lo - 1) >= lo * (1.0 - slack) {
        j_lo -= 1;
    }
    while base.powi(j_lo) < lo * (1.0 - slack) {
        j_lo += 1;
    }
    let mut j_hi = (hi.ln() / base.ln()).floor() as i32;
    while base.powi(j_hi + 1) <= hi * (1.0 + slack) {
        j_hi += 1;
    }
    while base.powi(j_hi) > hi * (1.0 + slack) {
        j_hi -= 1;
    }
    (j_lo <= j_hi).then_some((j_lo, j_hi))
}

/// `⌈log_{1+δ}(k(1+δ)/δ)⌉`: the most guesses the window can hold at once
/// (up to boundary rounding).
pub fn max_live_guesses(k: usize, delta: f64) -> usize {
    let r = k as f64 * (1.0 + delta) / delta;
    (r.ln() / (1.0 + delta).ln() - 1e-9).ceil() as usize
}

/// Parallel runs over a sliding window of OPT guesses.
pub struct GuessManager {
    k: usize,
    delta: f64,
    bucketed: bool,
    max_singleton: f64,
    runs: BTreeMap<i32, PrefixTree>,
    dismissed: Vec<i32>,
    live_guesses_max: usize,
    nodes_live_max: usize,
}

impl GuessManager {
    /// With `bucketed == false` every run keys increases exactly; the grid
    /// and dismissal logic are unchanged.
    pub fn new(k: usize, delta: f64, bucketed: bool) -> Result<Self> {
        check_delta(delta, false)?;
        Ok(Self {
            k,
            delta,
            bucketed,
            max_singleton: 0.0,
            runs: BTreeMap::new(),
            dismissed: Vec::new(),
            live_guesses_max: 0,
            nodes_live_max: 0,
        })
    }

    pub fn guess_value(&self, j: i32) -> f64 {
        (1.0 + self.delta).powi(j)
    }

    /// Running maximum singleton value.
    pub fn max_singleton(&self) -> f64 {
        self.max_singleton
    }

    /// Exponents of the live guesses, ascending.
    pub fn live_guesses(&self) -> Vec<i32> {
        self.runs.keys().copied().collect()
    }

    /// Exponents of guesses stopped so far, in stop order.
    pub fn dismissed(&self) -> &[i32] {
        &self.dismissed
    }

    pub fn run(&self, j: i32) -> Option<&PrefixTree> {
        self.runs.get(&j)
    }

    pub fn process(&mut self, e: ElementId, oracle: &Oracle<'_>) -> Result<()> {
        let singleton = oracle.eval(&[e]);
        if singleton > self.max_singleton {
            self.max_singleton = singleton;
            let window = guess_window(self.max_singleton, self.k, self.delta);
            let stale: Vec<i32> = self
                .runs
                .keys()
                .copied()
                .filter(|j| window.is_none_or(|(lo, hi)| *j < lo || *j > hi))
                .collect();
            for j in stale {
                self.runs.remove(&j);
                self.dismissed.push(j);
            }
            if let Some((lo, hi)) = window {
                for j in lo..=hi {
                    if !self.runs.contains_key(&j) {
                        let config = if self.bucketed {
                            TreeConfig::bucketed(self.k, self.delta, self.guess_value(j))?
                        } else {
                            TreeConfig::exact(self.k)
                        };
                        self.runs.insert(j, PrefixTree::new(config));
                    }
                }
            }
        }
        for tree in self.runs.values_mut() {
            tree.process(e, oracle);
        }
        self.live_guesses_max = self.live_guesses_max.max(self.runs.len());
        let nodes: usize = self.runs.values().map(PrefixTree::live_nodes).sum();
        self.nodes_live_max = self.nodes_live_max.max(nodes);
        Ok(())
    }

    /// Best solution over the surviving runs; ties go to the smallest guess.
    pub fn best_solution(&self) -> Solution {
        let mut best = Solution::empty();
        for tree in self.runs.values() {
            let s = tree.best_solution();
            if s.value > best.value + VALUE_TOLERANCE {
                best = s;
            }
        }
        best
    }

    pub fn live_guesses_max(&self) -> usize {
        self.live_guesses_max
    }

    pub fn nodes_live_max(&self) -> usize {
        self.nodes_live_max
    }
}

/// Runs [`GuessManager`] over the stream with bucketing at `delta`.
pub fn guess_run<'a, P: 'a>(
    elements: impl IntoIterator<Item = &'a Element<P>>,
    k: usize,
    delta: f64,
    oracle: &Oracle<'_>,
) -> Result<RunOutcome> {
    guess_run_with(elements, k, delta, true, oracle).map(|(_, o)| o)
}

/// [`guess_run`] with a choice of keying, returning the manager for
/// inspection.
pub fn guess_run_with<'a, P: 'a>(
    elements: impl IntoIterator<Item = &'a Element<P>>,
    k: usize,
    delta: f64,
    bucketed: bool,
    oracle: &Oracle<'_>,
) -> Result<(GuessManager, RunOutcome)> {
    let start = oracle.calls();
    let mut mgr = GuessManager::new(k, delta, bucketed)?;
    for e in elements {
        mgr.process(e.id, oracle)?;
    }
    let outcome = RunOutcome {
        solution: mgr.best_solution(),
        nodes_live_max: mgr.nodes_live_max(),
        oracle_calls: oracle.calls() - start,
        live_guesses_max: mgr.live_guesses_max(),
    };
    Ok((mgr, outcome))
}

/// Interval-greedy selection used by the worst-case analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafTrace {
    /// `r_1, ..., r_k`.
    pub elements: Vec<ElementId>,
    /// `f(R_0), ..., f(R_k)`.
    pub prefix_values: Vec<f64>,
}

impl LeafTrace {
    pub fn value(&self) -> f64 {
        *self.prefix_values.last().unwrap_or(&0.0)
    }
}

/// Computes the trace `r_1..r_k` for a realized stream: `r_1` is the most
/// valuable element up to and including the first optimum element, and
/// `r_{i+1}` maximizes `f(· | R_i)` over the elements after `r_i` up to and
/// including the `(i+1)`-th optimum element. Ties go to the earlier element.
///
/// Optimum elements are taken in stream order; `opt_ids` must contain at
/// least `k` of the stream's elements.
pub fn analysis_leaf_trace<P>(
    stream: &InjectedStream<P>,
    opt_ids: &[ElementId],
    oracle: &Oracle<'_>,
    k: usize,
) -> Result<LeafTrace> {
    let order: Vec<ElementId> = stream.ids();
    let opt_positions: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, id)| opt_ids.contains(id))
        .map(|(i, _)| i)
        .collect();
    if opt_positions.len() < k {
        return Err(Error::InvalidInstance(format!(
            "trace needs {k} optimum elements in the stream, found {}",
            opt_positions.len()
        )));
    }
    let mut chosen = Vec::with_capacity(k);
    let mut values = vec![oracle.eval(&[])];
    let mut after: Option<usize> = None;
    for &end in opt_positions.iter().take(k) {
        let start = after.map_or(0, |p| p + 1);
        let base = *values.last().unwrap();
        let mut best: Option<(usize, f64)> = None;
        for (pos, &e) in order.iter().enumerate().take(end + 1).skip(start) {
            let gain = oracle.marginal_given(e, &chosen, base)?;
            if best.is_none_or(|(_, g)| gain > g + VALUE_TOLERANCE) {
                best = Some((pos, gain));
            }
        }
        let (pos, gain) = best.expect("interval contains the optimum element");
        chosen.push(order[pos]);
        values.push(base + gain);
        after = Some(pos);
    }
    Ok(LeafTrace {
        elements: chosen,
        prefix_values: values,
    })
}
