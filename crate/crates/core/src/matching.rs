//! Semi-streaming maximum matching under adversarial injections.
//!
//! [`match_run`] runs two branches over one pass. Branch 1 is plain greedy.
//! Branch 2 runs greedy until its matching reaches `⌈(1/2 − ε)·m*⌉` edges,
//! freezes it, and hands the rest of the stream to an
//! [`AugPathCollector`], which gathers vertex-disjoint 3-augmenting paths
//! `x – a = b – y` (`a = b` matched, `x`, `y` free). The paths are applied at
//! the end of the stream and the larger of the two matchings is returned.
//! [`geometric_guess_run`] drops the knowledge of `m*` by running branch 2
//! for a window of geometric guesses keyed to the live greedy size.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::{BufRead, Write};

use crate::{Error, Result};

pub type Vertex = u64;

/// Undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        Ok(Self {
            u: u.min(v),
            v: u.max(v),
        })
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// A set of vertex-disjoint edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    mate: HashMap<Vertex, Vertex>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails with an invariant error if two edges share a vertex.
    pub fn from_edges(edges: &[Edge]) -> Result<Self> {
        let mut m = Self::new();
        for &e in edges {
            if !m.try_add(e) {
                return Err(Error::Invariant(format!("edge {e} shares a vertex with the matching")));
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.mate.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.mate.is_empty()
    }

    pub fn mate(&self, x: Vertex) -> Option<Vertex> {
        self.mate.get(&x).copied()
    }

    pub fn is_matched(&self, x: Vertex) -> bool {
        self.mate.contains_key(&x)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.mate(e.u) == Some(e.v)
    }

    /// Adds `e` if both endpoints are free.
    pub fn try_add(&mut self, e: Edge) -> bool {
        if self.is_matched(e.u) || self.is_matched(e.v) {
            return false;
        }
        self.mate.insert(e.u, e.v);
        self.mate.insert(e.v, e.u);
        true
    }

    pub fn remove(&mut self, e: Edge) -> bool {
        if !self.contains(e) {
            return false;
        }
        self.mate.remove(&e.u);
        self.mate.remove(&e.v);
        true
    }

    /// Edges sorted by endpoints.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .mate
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(&a, &b)| Edge { u: a, v: b })
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks the mate map is symmetric and loop-free.
    pub fn validate(&self) -> Result<()> {
        for (&a, &b) in &self.mate {
            if a == b || self.mate.get(&b) != Some(&a) {
                return Err(Error::Invariant(format!("inconsistent mate entry {a} -> {b}")));
            }
        }
        Ok(())
    }
}

/// One greedy update: `e` is taken iff both endpoints are free.
pub fn greedy_step(m: &mut Matching, e: Edge) -> bool {
    m.try_add(e)
}

pub fn greedy(stream: &[Edge]) -> Matching {
    let mut m = Matching::new();
    for &e in stream {
        greedy_step(&mut m, e);
    }
    m
}

/// Fixed constants of the two-branch algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub rho: f64,
    pub beta: f64,
    /// Ratio of the geometric `m*` guesses.
    pub delta_guess: f64,
    /// Buffer the whole graph and solve exactly when `m* ≤ 2/ρ`. Off by
    /// default so that small instances exercise the streaming branches.
    pub store_small_graphs: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self::with_epsilon(1.0 / 50.0)
    }
}

impl MatchConfig {
    /// `α = ε`, `ρ = ε/4`, `β = (4 − 43ε)/(4 − 8ε)`, `δ_guess = 0.1`.
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            alpha: epsilon,
            rho: epsilon / 4.0,
            beta: (4.0 - 43.0 * epsilon) / (4.0 - 8.0 * epsilon),
            delta_guess: 0.1,
            store_small_graphs: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::Precondition(format!(
                "epsilon {} outside (0, 1/2)",
                self.epsilon
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Precondition(format!("beta {} outside (0, 1)", self.beta)));
        }
        if !(self.delta_guess > 0.0 && self.delta_guess < 1.0) {
            return Err(Error::Precondition(format!(
                "delta_guess {} outside (0, 1)",
                self.delta_guess
            )));
        }
        Ok(())
    }

    /// `⌈(1/2 − ε)·m*⌉` (with a small slack against float noise).
    pub fn phase1_threshold(&self, m_star: f64) -> usize {
        ((0.5 - self.epsilon) * m_star - 1e-9).ceil().max(0.0) as usize
    }

    /// Fraction `β²/32` of `|M|` the collector must deliver.
    pub fn path_fraction(&self) -> f64 {
        self.beta * self.beta / 32.0
    }

    /// `min{ε, (β²/32)(1 − ε) − ε, ε²/8}`.
    pub fn gamma(&self) -> f64 {
        let e = self.epsilon;
        e.min(self.path_fraction() * (1.0 - e) - e).min(e * e / 8.0)
    }

    /// `⌈log_{1+δ}(4(1+δ)/(1 − 2ε))⌉`.
    pub fn max_live_guesses(&self) -> usize {
        let d = self.delta_guess;
        let r = 4.0 * (1.0 + d) / (1.0 - 2.0 * self.epsilon);
        (r.ln() / (1.0 + d).ln() - 1e-9).ceil() as usize
    }
}

/// A 3-augmenting path `x – a = b – y`: `(a, b)` is matched, `x` and `y` are
/// free, and swapping gains one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AugPath {
    pub x: Vertex,
    pub a: Vertex,
    pub b: Vertex,
    pub y: Vertex,
}

impl AugPath {
    pub fn vertices(&self) -> [Vertex; 4] {
        [self.x, self.a, self.b, self.y]
    }

    /// Checks the path against `m` and a set of edges that must contain the
    /// two wings.
    pub fn is_valid_for(&self, m: &Matching, available: &HashSet<Edge>) -> bool {
        let distinct = HashSet::from(self.vertices()).len() == 4;
        let wing = |p, q| Edge::new(p, q).is_ok_and(|e| available.contains(&e));
        distinct
            && m.mate(self.a) == Some(self.b)
            && !m.is_matched(self.x)
            && !m.is_matched(self.y)
            && wing(self.x, self.a)
            && wing(self.b, self.y)
    }
}

/// Wing slots kept per matched edge: two candidate free neighbours per
/// endpoint.
pub const WING_SLOTS_PER_EDGE: usize = 4;

/// Streaming collector of vertex-disjoint 3-augmenting paths for a frozen
/// matching.
///
/// For every matched edge it keeps at most two wing candidates per endpoint
/// (free neighbours seen so far). A candidate whose free endpoint is taken
/// by a committed path makes room for a new one. A path is committed as
/// soon as both endpoints of a matched edge hold unused candidates with
/// distinct free ends. Storage never exceeds
/// [`WING_SLOTS_PER_EDGE`]`·|M|` vertex slots.
#[derive(Debug, Clone)]
pub struct AugPathCollector {
    base: Matching,
    slot_of: HashMap<Vertex, (usize, usize)>,
    ends: Vec<(Vertex, Vertex)>,
    wings: Vec<[[Option<Vertex>; 2]; 2]>,
    committed: Vec<bool>,
    used: HashSet<Vertex>,
    paths: Vec<AugPath>,
    occupied: usize,
    peak_occupied: usize,
}

impl AugPathCollector {
    pub fn new(base: Matching) -> Self {
        let edges = base.edges();
        let mut slot_of = HashMap::with_capacity(edges.len() * 2);
        for (i, e) in edges.iter().enumerate() {
            slot_of.insert(e.u, (i, 0));
            slot_of.insert(e.v, (i, 1));
        }
        Self {
            slot_of,
            ends: edges.iter().map(|e| (e.u, e.v)).collect(),
            wings: vec![[[None; 2]; 2]; edges.len()],
            committed: vec![false; edges.len()],
            used: HashSet::new(),
            paths: Vec::new(),
            occupied: 0,
            peak_occupied: 0,
            base,
        }
    }

    pub fn base(&self) -> &Matching {
        &self.base
    }

    pub fn process(&mut self, e: Edge) {
        let (p, q) = e.endpoints();
        match (self.slot_of.get(&p).copied(), self.slot_of.get(&q).copied()) {
            (Some(slot), None) => self.offer(slot, q),
            (None, Some(slot)) => self.offer(slot, p),
            _ => {}
        }
    }

    fn offer(&mut self, (edge, side): (usize, usize), free: Vertex) {
        if self.committed[edge] || self.used.contains(&free) {
            return;
        }
        let slots = &mut self.wings[edge][side];
        if slots.contains(&Some(free)) {
            return;
        }
        let used = &self.used;
        let target = slots
            .iter()
            .position(|s| s.is_none())
            .or_else(|| slots.iter().position(|s| s.is_some_and(|v| used.contains(&v))));
        let Some(i) = target else {
            return;
        };
        if slots[i].is_none() {
            self.occupied += 1;
            self.peak_occupied = self.peak_occupied.max(self.occupied);
        }
        slots[i] = Some(free);
        self.try_commit(edge);
    }

    fn try_commit(&mut self, edge: usize) {
        let [left, right] = self.wings[edge];
        let live = |v: &Option<Vertex>| v.filter(|x| !self.used.contains(x));
        for x in left.iter().filter_map(live) {
            if let Some(y) = right.iter().filter_map(live).find(|&y| y != x) {
                let (a, b) = self.ends[edge];
                self.paths.push(AugPath { x, a, b, y });
                self.used.insert(x);
                self.used.insert(y);
                self.committed[edge] = true;
                let freed = self.wings[edge].iter().flatten().filter(|s| s.is_some()).count();
                self.occupied -= freed;
                self.wings[edge] = [[None; 2]; 2];
                return;
            }
        }
    }

    pub fn paths(&self) -> &[AugPath] {
        &self.paths
    }

    /// Currently occupied wing slots.
    pub fn memory_slots(&self) -> usize {
        self.occupied
    }

    pub fn peak_memory_slots(&self) -> usize {
        self.peak_occupied
    }

    pub fn into_paths(self) -> Vec<AugPath> {
        self.paths
    }
}

/// Collects 3-augmenting paths for `m` from `suffix`.
pub fn three_aug_paths(m: &Matching, suffix: &[Edge]) -> (Vec<AugPath>, usize) {
    let mut c = AugPathCollector::new(m.clone());
    for &e in suffix {
        c.process(e);
    }
    let peak = c.peak_memory_slots();
    (c.into_paths(), peak)
}

/// Swaps each path into `m`. Paths must be vertex-disjoint and valid.
pub fn apply_paths(m: &Matching, paths: &[AugPath]) -> Result<Matching> {
    let mut out = m.clone();
    for p in paths {
        let mid = Edge::new(p.a, p.b)?;
        if !out.remove(mid) {
            return Err(Error::Invariant(format!("path edge {mid} is not matched")));
        }
        let (l, r) = (Edge::new(p.x, p.a)?, Edge::new(p.b, p.y)?);
        if !(out.try_add(l) && out.try_add(r)) {
            return Err(Error::Invariant(format!("path {p:?} collides with the matching")));
        }
    }
    Ok(out)
}

/// Branch 2 of the two-branch algorithm for one `m*` value.
#[derive(Debug, Clone)]
struct TwoPhase {
    threshold: usize,
    phase1: Matching,
    collector: Option<AugPathCollector>,
}

impl TwoPhase {
    fn new(threshold: usize, seed: Matching) -> Self {
        let mut b = Self {
            threshold,
            phase1: seed,
            collector: None,
        };
        b.maybe_freeze();
        b
    }

    fn maybe_freeze(&mut self) {
        if self.collector.is_none() && self.phase1.len() >= self.threshold {
            self.collector = Some(AugPathCollector::new(self.phase1.clone()));
        }
    }

    fn process(&mut self, e: Edge) {
        match &mut self.collector {
            Some(c) => c.process(e),
            None => {
                greedy_step(&mut self.phase1, e);
                self.maybe_freeze();
            }
        }
    }

    fn finish(&self) -> Result<(Matching, usize, usize)> {
        match &self.collector {
            Some(c) => Ok((
                apply_paths(&self.phase1, c.paths())?,
                c.paths().len(),
                c.peak_memory_slots(),
            )),
            None => Ok((self.phase1.clone(), 0, 0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOutcome {
    pub matching: Matching,
    pub greedy_size: usize,
    pub branch2_size: usize,
    pub phase1_size: usize,
    pub paths_found: usize,
    pub collector_peak_slots: usize,
    pub live_guesses_max: usize,
}

/// Two-branch algorithm with known optimum size `m_star`.
pub fn match_run(stream: &[Edge], m_star: usize, cfg: &MatchConfig) -> Result<MatchOutcome> {
    cfg.validate()?;
    if m_star == 0 {
        return Err(Error::Precondition("m_star must be at least 1".into()));
    }
    if cfg.store_small_graphs && (m_star as f64) <= 2.0 / cfg.rho {
        let exact = exact_max_matching(stream)?;
        let g = greedy(stream);
        let size = exact.len();
        return Ok(MatchOutcome {
            matching: exact,
            greedy_size: g.len(),
            branch2_size: size,
            phase1_size: 0,
            paths_found: 0,
            collector_peak_slots: 0,
            live_guesses_max: 1,
        });
    }
    let mut m1 = Matching::new();
    let mut b2 = TwoPhase::new(cfg.phase1_threshold(m_star as f64), Matching::new());
    for &e in stream {
        greedy_step(&mut m1, e);
        b2.process(e);
    }
    let (m2, paths, peak) = b2.finish()?;
    let outcome = MatchOutcome {
        greedy_size: m1.len(),
        branch2_size: m2.len(),
        phase1_size: b2.phase1.len(),
        paths_found: paths,
        collector_peak_slots: peak,
        live_guesses_max: 1,
        matching: if m2.len() > m1.len() { m2 } else { m1 },
    };
    outcome.matching.validate()?;
    Ok(outcome)
}

/// Exponents `i` with `|M₁|/(1+δ) ≤ (1+δ)^i ≤ 4|M₁|/(1 − 2ε)`.
pub fn matching_guess_window(greedy_size: usize, cfg: &MatchConfig) -> Option<(i32, i32)> {
    if greedy_size == 0 {
        return None;
    }
    let base = 1.0 + cfg.delta_guess;
    let lo = greedy_size as f64 / base;
    let hi = 4.0 * greedy_size as f64 / (1.0 - 2.0 * cfg.epsilon);
    let slack = 1e-12;
    let mut i_lo = (lo.ln() / base.ln()).ceil() as i32;
    while base.powi(i_lo - 1) >= lo * (1.0 - slack) {
        i_lo -= 1;
    }
    while base.powi(i_lo) < lo * (1.0 - slack) {
        i_lo += 1;
    }
    let mut i_hi = (hi.ln() / base.ln()).floor() as i32;
    while base.powi(i_hi + 1) <= hi * (1.0 + slack) {
        i_hi += 1;
    }
    while base.powi(i_hi) > hi * (1.0 + slack) {
        i_hi -= 1;
    }
    (i_lo <= i_hi).then_some((i_lo, i_hi))
}

/// Two-branch algorithm without knowledge of `m*`: branch 2 runs once per
/// live guess `(1+δ)^i`. Guesses leaving the window are dismissed; new ones
/// start from the greedy matching at that point of the stream.
pub fn geometric_guess_run(stream: &[Edge], cfg: &MatchConfig) -> Result<MatchOutcome> {
    cfg.validate()?;
    let base = 1.0 + cfg.delta_guess;
    let mut m1 = Matching::new();
    let mut runs: std::collections::BTreeMap<i32, TwoPhase> = Default::default();
    let mut live_max = 0;
    for &e in stream {
        for r in runs.values_mut() {
            r.process(e);
        }
        if greedy_step(&mut m1, e) {
            let window = matching_guess_window(m1.len(), cfg);
            runs.retain(|i, _| window.is_some_and(|(lo, hi)| (lo..=hi).contains(i)));
            if let Some((lo, hi)) = window {
                for i in lo..=hi {
                    runs.entry(i)
                        .or_insert_with(|| TwoPhase::new(cfg.phase1_threshold(base.powi(i)), m1.clone()));
                }
            }
            live_max = live_max.max(runs.len());
        }
    }
    let mut best = MatchOutcome {
        greedy_size: m1.len(),
        branch2_size: 0,
        phase1_size: 0,
        paths_found: 0,
        collector_peak_slots: 0,
        live_guesses_max: live_max,
        matching: m1.clone(),
    };
    for r in runs.values() {
        let (m2, paths, peak) = r.finish()?;
        best.collector_peak_slots = best.collector_peak_slots.max(peak);
        if m2.len() > best.branch2_size {
            best.branch2_size = m2.len();
            best.phase1_size = r.phase1.len();
            best.paths_found = paths;
        }
        if m2.len() > best.matching.len() {
            best.matching = m2;
        }
    }
    best.matching.validate()?;
    Ok(best)
}

/// Largest general graph solved by the subset dynamic program.
pub const MAX_GENERAL_VERTICES: usize = 20;
/// Largest bipartite graph accepted by the augmenting-path solver.
pub const MAX_BIPARTITE_VERTICES: usize = 10_000;

struct Compressed {
    labels: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

fn compress(edges: &[Edge]) -> Compressed {
    let mut index: HashMap<Vertex, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in edges {
        if !seen.insert(*e) {
            continue;
        }
        let mut id = |x: Vertex| {
            *index.entry(x).or_insert_with(|| {
                labels.push(x);
                labels.len() - 1
            })
        };
        let (a, b) = (id(e.u), id(e.v));
        out.push((a, b));
    }
    Compressed { labels, edges: out }
}

/// 2-colouring of the graph, if it is bipartite.
fn two_colouring(n: usize, edges: &[(usize, usize)]) -> Option<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let c = colour[x].unwrap();
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(!c);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(|c| c.unwrap()).collect())
}

/// Maximum matching of a bipartite graph by Hopcroft–Karp.
pub fn max_matching_bipartite(edges: &[Edge]) -> Result<Matching> {
    let g = compress(edges);
    let n = g.labels.len();
    if n > MAX_BIPARTITE_VERTICES {
        return Err(Error::SizeLimit {
            what: "bipartite vertices",
            actual: n as u128,
            limit: MAX_BIPARTITE_VERTICES as u128,
        });
    }
    let side = two_colouring(n, &g.edges).ok_or_else(|| Error::InvalidInput("graph is not bipartite".into()))?;
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        let (l, r) = if side[a] { (b, a) } else { (a, b) };
        adj[l].push(r);
    }
    const NIL: usize = usize::MAX;
    let left: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let mut mate = vec![NIL; n];
    let mut dist = vec![0u32; n];
    let bfs = |mate: &[usize], dist: &mut [u32]| -> bool {
        let mut queue = VecDeque::new();
        let mut found = false;
        for &l in &left {
            if mate[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = u32::MAX;
            }
        }
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == u32::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    };
    fn dfs(l: usize, adj: &[Vec<usize>], mate: &mut [usize], dist: &mut [u32]) -> bool {
        for i in 0..adj[l].len() {
            let r = adj[l][i];
            let next = mate[r];
            if next == usize::MAX || (dist[next] == dist[l] + 1 && dfs(next, adj, mate, dist)) {
                mate[l] = r;
                mate[r] = l;
                return true;
            }
        }
        dist[l] = u32::MAX;
        false
    }
    while bfs(&mate, &mut dist) {
        for &l in &left {
            if mate[l] == NIL {
                dfs(l, &adj, &mut mate, &mut dist);
            }
        }
    }
    let mut m = Matching::new();
    for &l in &left {
        if mate[l] != NIL {
            m.try_add(Edge::new(g.labels[l], g.labels[mate[l]])?);
        }
    }
    Ok(m)
}

/// Maximum matching of a general graph with at most
/// [`MAX_GENERAL_VERTICES`] vertices, by dynamic programming over vertex
/// subsets.
pub fn max_matching_small(edges: &[Edge]) -> Result<Matching> {
    let g = compress(edges);
    let n = g.labels.len();
    if n > MAX_GENERAL_VERTICES {
        return Err(Error::SizeLimit {
            what: "general-graph vertices",
            actual: n as u128,
            limit: MAX_GENERAL_VERTICES as u128,
        });
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in &g.edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let full = 1usize << n;
    let mut best = vec![0u8; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut b = best[rest];
        let mut nb = adj[v] as usize & rest;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            b = b.max(1 + best[rest & !(1 << u)]);
            nb &= nb - 1;
        }
        best[mask] = b;
    }
    let mut m = Matching::new();
    let mut mask = full - 1;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        if best[mask] == best[rest] {
            mask = rest;
            continue;
        }
        let mut nb = adj[v] as usize & rest;
        loop {
            let u = nb.trailing_zeros() as usize;
            if best[mask] == 1 + best[rest & !(1 << u)] {
                m.try_add(Edge::new(g.labels[v], g.labels[u])?);
                mask = rest & !(1 << u);
                break;
            }
            nb &= nb - 1;
        }
    }
    Ok(m)
}

/// Maximum-cardinality matching: Hopcroft–Karp on bipartite graphs, the
/// subset program on small general graphs, an error otherwise. Repeated
/// edges are ignored.
pub fn exact_max_matching(edges: &[Edge]) -> Result<Matching> {
    let g = compress(edges);
    if two_colouring(g.labels.len(), &g.edges).is_some() {
        max_matching_bipartite(edges)
    } else {
        max_matching_small(edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Augmentability {
    pub three_augmentable: usize,
    pub non_three_augmentable: usize,
}

/// Classifies each edge of `m` through the component structure of
/// `m ∪ m_star`: an edge is 3-augmentable when it is the middle of a
/// length-3 path that starts and ends with `m_star` edges.
pub fn count_3_augmentable(m: &[Edge], m_star: &[Edge]) -> Result<Augmentability> {
    let mm = Matching::from_edges(m)?;
    let ms = Matching::from_edges(m_star)?;
    let mut out = Augmentability {
        three_augmentable: 0,
        non_three_augmentable: 0,
    };
    for e in mm.edges() {
        let (a, b) = e.endpoints();
        let aug = !ms.contains(e)
            && matches!((ms.mate(a), ms.mate(b)), (Some(x), Some(y)) if !mm.is_matched(x) && !mm.is_matched(y));
        if aug {
            out.three_augmentable += 1;
        } else {
            out.non_three_augmentable += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RobustnessReport {
    pub base_size: usize,
    /// Greedy size after deleting position `i`.
    pub sizes_after_deletion: Vec<usize>,
    /// Positions whose deletion moved the greedy size by more than one.
    pub violations: Vec<usize>,
}

impl RobustnessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reruns greedy with each single edge deleted and compares sizes.
pub fn robust_greedy_check(stream: &[Edge]) -> RobustnessReport {
    let base_size = greedy(stream).len();
    let mut report = RobustnessReport {
        base_size,
        ..Default::default()
    };
    let mut rest = Vec::with_capacity(stream.len());
    for i in 0..stream.len() {
        rest.clear();
        rest.extend_from_slice(&stream[..i]);
        rest.extend_from_slice(&stream[i + 1..]);
        let size = greedy(&rest).len();
        if size.abs_diff(base_size) > 1 {
            report.violations.push(i);
        }
        report.sizes_after_deletion.push(size);
    }
    report
}

/// Reads `u v` pairs, one per line in arrival order. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_edge_stream<R: BufRead>(input: R) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: n + 1, msg };
        let mut it = t.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(format!("expected two vertex ids, got {t:?}")));
        };
        let a: Vertex = a.parse().map_err(|e| parse_err(format!("{a:?}: {e}")))?;
        let b: Vertex = b.parse().map_err(|e| parse_err(format!("{b:?}: {e}")))?;
        out.push(Edge::new(a, b).map_err(|e| parse_err(e.to_string()))?);
    }
    Ok(out)
}

pub fn write_edge_stream<W: Write>(mut out: W, edges: &[Edge]) -> Result<()> {
    for e in edges {
        writeln!(out, "{} {}", e.u, e.v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: Vertex, v: Vertex) -> Edge {
        Edge::new(u, v).unwrap()
    }

    #[test]
    fn greedy_basics() {
        let mut m = Matching::new();
        assert!(greedy_step(&mut m, e(1, 2)));
        assert_eq!(m.edges(), vec![e(1, 2)]);
        assert!(!greedy_step(&mut m, e(2, 3)));
        assert_eq!(m.len(), 1);
        let m = greedy(&[e(1, 2), e(2, 3), e(3, 4)]);
        assert_eq!(m.edges(), vec![e(1, 2), e(3, 4)]);
        assert_eq!(exact_max_matching(&[e(1, 2), e(2, 3), e(3, 4)]).unwrap().len(), 2);
    }

    #[test]
    fn self_loops_rejected() {
        assert!(matches!(Edge::new(3, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn repeated_edges_are_idempotent() {
        let m = greedy(&[e(1, 2), e(1, 2), e(2, 1)]);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn constants() {
        let c = MatchConfig::default();
        assert_eq!(c.epsilon, 0.02);
        assert_eq!(c.rho, 0.005);
        assert!((c.beta - 157.0 / 192.0).abs() < 1e-15);
        assert!((c.gamma() - 1.0 / 20000.0).abs() < 1e-15);
        assert_eq!(c.phase1_threshold(50.0), 24);
        assert_eq!(c.phase1_threshold(51.0), 25);
    }

    #[test]
    fn single_path_collected() {
        let m = Matching::from_edges(&[e(1, 2)]).unwrap();
        let (paths, _) = three_aug_paths(&m, &[e(10, 1), e(2, 20)]);
        assert_eq!(
            paths,
            vec![AugPath {
                x: 10,
                a: 1,
                b: 2,
                y: 20
            }]
        );
        let after = apply_paths(&m, &paths).unwrap();
        assert_eq!(after.len(), 2);
    }

    #[test]
    fn no_wings_no_paths() {
        let m = Matching::from_edges(&[e(1, 2), e(3, 4)]).unwrap();
        let (paths, _) = three_aug_paths(&m, &[e(1, 3), e(10, 11), e(2, 4)]);
        assert!(paths.is_empty());
    }

    #[test]
    fn shared_free_vertex_is_not_reused() {
        // Both matched edges want vertex 9 on one side.
        let m = Matching::from_edges(&[e(1, 2), e(3, 4)]).unwrap();
        let (paths, _) = three_aug_paths(&m, &[e(9, 1), e(2, 8), e(9, 3), e(4, 7)]);
        assert_eq!(paths.len(), 1);
        let mut used: Vec<Vertex> = paths.iter().flat_map(|p| p.vertices()).collect();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used.len(), 4 * paths.len());
    }

    #[test]
    fn stale_wing_is_replaced() {
        let m = Matching::from_edges(&[e(1, 2), e(3, 4)]).unwrap();
        // 3 stores wings 5 and 6, both consumed by the first path's neighbours.
        let stream = [e(3, 5), e(3, 6), e(1, 5), e(2, 6), e(3, 7), e(4, 8)];
        let (paths, peak) = three_aug_paths(&m, &stream);
        assert_eq!(paths.len(), 2);
        assert!(peak <= WING_SLOTS_PER_EDGE * m.len());
    }

    #[test]
    fn same_free_vertex_cannot_close_both_sides() {
        let m = Matching::from_edges(&[e(1, 2)]).unwrap();
        let (paths, _) = three_aug_paths(&m, &[e(1, 9), e(2, 9)]);
        assert!(paths.is_empty());
    }

    #[test]
    fn bipartite_and_small_solvers() {
        let k33: Vec<Edge> = (0..3).flat_map(|a| (10..13).map(move |b| e(a, b))).collect();
        assert_eq!(max_matching_bipartite(&k33).unwrap().len(), 3);
        assert_eq!(max_matching_small(&k33).unwrap().len(), 3);
        let triangle = [e(1, 2), e(2, 3), e(1, 3)];
        assert!(max_matching_bipartite(&triangle).is_err());
        assert_eq!(exact_max_matching(&triangle).unwrap().len(), 1);
        let big: Vec<Edge> = (0..11)
            .flat_map(|i| [e(i, i + 100), e(i + 100, i + 200), e(i, i + 200)])
            .collect();
        assert!(matches!(exact_max_matching(&big), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn augmentability_examples() {
        let star = [e(1, 2), e(3, 4)];
        let c = count_3_augmentable(&star, &star).unwrap();
        assert_eq!(c.three_augmentable, 0);
        assert_eq!(c.non_three_augmentable, 2);
        let c = count_3_augmentable(&[e(2, 3)], &[e(1, 2), e(3, 4)]).unwrap();
        assert_eq!(c.three_augmentable, 1);
        assert!(matches!(
            count_3_augmentable(&[e(1, 2), e(2, 3)], &star),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn robustness_examples() {
        assert!(robust_greedy_check(&[]).is_clean());
        let stream = [e(1, 2), e(2, 3), e(3, 4)];
        let r = robust_greedy_check(&stream);
        assert!(r.is_clean());
        // (2,3) was not taken; dropping it changes nothing.
        assert_eq!(r.sizes_after_deletion[1], r.base_size);
    }

    #[test]
    fn perfect_matching_stream() {
        let stream: Vec<Edge> = (0..40).map(|i| e(2 * i, 2 * i + 1)).collect();
        let out = match_run(&stream, 40, &MatchConfig::default()).unwrap();
        assert_eq!(out.matching.len(), 40);
    }

    #[test]
    fn single_edge_guessing() {
        let out = geometric_guess_run(&[e(1, 2)], &MatchConfig::default()).unwrap();
        assert_eq!(out.matching.len(), 1);
    }

    #[test]
    fn guess_window_definition() {
        let cfg = MatchConfig::default();
        for size in [1usize, 2, 7, 50, 333] {
            let (lo, hi) = matching_guess_window(size, &cfg).unwrap();
            let base = 1.1f64;
            for i in lo - 3..=hi + 3 {
                let g = base.powi(i);
                let inside = g >= size as f64 / base * (1.0 - 1e-12) && g <= 4.0 * size as f64 / 0.96 * (1.0 + 1e-12);
                assert_eq!(inside, (lo..=hi).contains(&i));
            }
            assert!((hi - lo + 1) as usize <= cfg.max_live_guesses());
        }
    }

    #[test]
    fn edge_file_round_trip_and_errors() {
        let edges = vec![e(1, 2), e(5, 3)];
        let mut buf = Vec::new();
        write_edge_stream(&mut buf, &edges).unwrap();
        assert_eq!(read_edge_stream(buf.as_slice()).unwrap(), edges);
        assert!(matches!(
            read_edge_stream("# c\n1 2\n3\n".as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(read_edge_stream("4 4\n".as_bytes()).is_err());
    }

    #[test]
    fn small_graph_buffering_is_opt_in() {
        let stream = [e(2, 3), e(4, 5), e(1, 2), e(5, 6), e(3, 4)];
        let mut cfg = MatchConfig::default();
        assert_eq!(match_run(&stream, 3, &cfg).unwrap().matching.len(), 2);
        cfg.store_small_graphs = true;
        assert_eq!(match_run(&stream, 3, &cfg).unwrap().matching.len(), 3);
    }
}
