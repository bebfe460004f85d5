//! Instance generators, adversary strategies and experiment orchestration.
//!
//! Every adversary strategy here is an empirical design of this crate; the
//! summary emitted by [`run_experiment`] says so in its metadata.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::matching::{self, Edge, MatchConfig, Matching};
use crate::recurrence::{self, Ratio64};
use crate::rng::SeededRng;
use crate::stream::{
    build_stream, enumerate_streams, read_instance, Element, ElementId, InjectedStream, Injection, InjectionPlan,
    InstanceSplit,
};
use crate::submodular::{
    brute_force_opt, verify_axioms, Additive, CoverageInstance, GroundSet, Oracle, SetFunction, Solution,
};
use crate::tree::{guess_run_with, tree_run, TreeConfig};
use crate::{Error, Result};

/// Environment variable that redirects relative output paths.
pub const OUT_DIR_ENV: &str = "ADVINJ_OUT_DIR";

/// Largest ground set a generator will produce.
pub const MAX_GENERATED_ELEMENTS: usize = 40;

const ADVERSARY_NOTE: &str = "adversary strategies are empirical designs of this harness";

/// Resolves `path` under [`OUT_DIR_ENV`] when it is set and `path` is
/// relative.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Deterministic seed for item `index` of stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    SeededRng::substream(master ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15), index).next_u64()
}

// ---------------------------------------------------------------------------
// Adversaries

/// Noise placement strategy. A strategy sees `|good|`, the noise list and
/// its own seed, never the permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum Adversary {
    /// Drop the noise entirely.
    None,
    /// All noise before the first good element.
    #[default]
    Front,
    /// All noise after the last good element.
    Back,
    /// Noise spread evenly over all slots.
    Spread,
    /// Each noise element at an independent uniform slot.
    Random,
    /// All noise at one slot.
    Block { slot: usize },
}

impl Adversary {
    pub fn name(&self) -> String {
        match self {
            Adversary::None => "none".into(),
            Adversary::Front => "front".into(),
            Adversary::Back => "back".into(),
            Adversary::Spread => "spread".into(),
            Adversary::Random => "random".into(),
            Adversary::Block { slot } => format!("block:{slot}"),
        }
    }

    /// Builds the plan. List order within a slot follows `noise`.
    pub fn plan(&self, good_len: usize, noise: &[ElementId], seed: u64) -> Result<InjectionPlan> {
        let slots: Vec<usize> = match *self {
            Adversary::None => return Ok(InjectionPlan::empty()),
            Adversary::Front => vec![0; noise.len()],
            Adversary::Back => vec![good_len; noise.len()],
            Adversary::Spread => {
                let m = noise.len().max(1);
                (0..noise.len()).map(|i| i * (good_len + 1) / m).collect()
            }
            Adversary::Random => {
                let mut rng = SeededRng::new(seed);
                let mut s: Vec<usize> = noise.iter().map(|_| rng.below(good_len + 1)).collect();
                s.sort_unstable();
                s
            }
            Adversary::Block { slot } => {
                if slot > good_len {
                    return Err(Error::InvalidPlan(format!("block slot {slot} beyond {good_len}")));
                }
                vec![slot; noise.len()]
            }
        };
        Ok(InjectionPlan::new(
            noise
                .iter()
                .zip(slots)
                .map(|(&id, slot)| Injection { slot, noise: id })
                .collect(),
        ))
    }
}

impl FromStr for Adversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => Adversary::None,
            "front" => Adversary::Front,
            "back" => Adversary::Back,
            "spread" => Adversary::Spread,
            "random" => Adversary::Random,
            _ => match s.strip_prefix("block:").map(str::parse) {
                Some(Ok(slot)) => Adversary::Block { slot },
                _ => return Err(Error::InvalidInput(format!("unknown adversary {s:?}"))),
            },
        })
    }
}

/// Number of plans [`monotone_plans`] would produce: `C(m + g, m)`.
pub fn monotone_plan_count(good_len: usize, noise_len: usize) -> u128 {
    let (n, r) = ((good_len + noise_len) as u128, noise_len.min(good_len) as u128);
    (0..r).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Every plan that keeps `noise` in list order: all non-decreasing slot
/// assignments. Errors past `limit` plans.
pub fn monotone_plans(good_len: usize, noise: &[ElementId], limit: u128) -> Result<Vec<InjectionPlan>> {
    let count = monotone_plan_count(good_len, noise.len());
    if count > limit {
        return Err(Error::SizeLimit {
            what: "monotone plans",
            actual: count,
            limit,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut slots = vec![0usize; noise.len()];
    loop {
        out.push(InjectionPlan::new(
            noise
                .iter()
                .zip(&slots)
                .map(|(&id, &slot)| Injection { slot, noise: id })
                .collect(),
        ));
        // Next non-decreasing sequence over 0..=good_len.
        let Some(i) = (0..slots.len()).rev().find(|&i| slots[i] < good_len) else {
            return Ok(out);
        };
        let v = slots[i] + 1;
        slots[i..].fill(v);
    }
}

// ---------------------------------------------------------------------------
// Submodular instances

/// Element payload of coverage instances. `weights[i]` is the weight of
/// `points[i]`; unit weights when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePayload {
    pub points: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SubmodKind {
    FourRectangles,
    #[default]
    RandomCoverage,
    DecoyFront,
}

impl FromStr for SubmodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "four-rectangles" => Ok(Self::FourRectangles),
            "random-coverage" => Ok(Self::RandomCoverage),
            "decoy-front" => Ok(Self::DecoyFront),
            _ => Err(Error::InvalidInput(format!("unknown submodular generator {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingKind {
    #[default]
    RandomBipartite,
    Planted,
    GreedyTrap,
}

impl FromStr for MatchingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-bipartite" => Ok(Self::RandomBipartite),
            "planted" => Ok(Self::Planted),
            "greedy-trap" => Ok(Self::GreedyTrap),
            _ => Err(Error::InvalidInput(format!("unknown matching generator {s:?}"))),
        }
    }
}

/// Generator parameters. Fields not used by a generator are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorParams {
    /// Ground-set size (random-coverage) or decoy count (decoy-front).
    pub n: usize,
    pub k: usize,
    pub universe: usize,
    pub density: f64,
    /// Points per optimum block (decoy-front).
    pub block: usize,
    /// Vertices per side (random-bipartite).
    pub side: usize,
    pub edges: usize,
    /// Matched edges (planted) or gadgets (greedy-trap).
    pub size: usize,
    /// Planted fraction (planted) or trapped fraction (greedy-trap).
    pub fraction: f64,
    /// Hub vertices adjacent to many matched vertices (planted).
    pub hubs: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            n: 16,
            k: 3,
            universe: 16,
            density: 0.25,
            block: 4,
            side: 20,
            edges: 60,
            size: 40,
            fraction: 0.9,
            hubs: 2,
        }
    }
}

/// A coverage instance with its good/noise split, plan and optimum.
#[derive(Debug, Clone)]
pub struct SubmodInstance {
    pub split: InstanceSplit<CoveragePayload>,
    pub plan: InjectionPlan,
    pub function: CoverageInstance,
    pub k: usize,
    /// Brute-force optimum over the whole ground set.
    pub opt: Solution,
}

impl SubmodInstance {
    /// Builds the coverage function from the payloads (ids must be `0..n`)
    /// and computes the optimum by brute force.
    pub fn from_parts(split: InstanceSplit<CoveragePayload>, plan: InjectionPlan, k: usize) -> Result<Self> {
        plan.validate(&split)?;
        let function = coverage_from_payloads(split.good().iter().chain(split.noise()))?;
        let opt = brute_force_opt(&Oracle::new(&function), &GroundSet::full(function.ground_size()), k)?;
        Ok(Self {
            split,
            plan,
            function,
            k,
            opt,
        })
    }

    pub fn stream(&self, seed: u64) -> Result<InjectedStream<CoveragePayload>> {
        build_stream(&self.split, &self.plan, seed)
    }
}

fn coverage_from_payloads<'a>(
    elements: impl Iterator<Item = &'a Element<CoveragePayload>>,
) -> Result<CoverageInstance> {
    let mut by_id: BTreeMap<u32, &CoveragePayload> = BTreeMap::new();
    for e in elements {
        by_id.insert(e.id.0, &e.payload);
    }
    if by_id.keys().enumerate().any(|(i, &id)| id as usize != i) {
        return Err(Error::InvalidInstance("element ids must be 0..n".into()));
    }
    let sets: Vec<Vec<u64>> = by_id.values().map(|p| p.points.clone()).collect();
    if by_id.values().all(|p| p.weights.is_none()) {
        return Ok(CoverageInstance::new(sets));
    }
    let mut weights: BTreeMap<u64, f64> = BTreeMap::new();
    for (id, p) in &by_id {
        let w = p
            .weights
            .as_ref()
            .ok_or_else(|| Error::InvalidInstance(format!("element {id} lacks weights")))?;
        if w.len() != p.points.len() {
            return Err(Error::InvalidInstance(format!(
                "element {id}: points and weights differ in length"
            )));
        }
        for (&pt, &x) in p.points.iter().zip(w) {
            if let Some(old) = weights.insert(pt, x) {
                if old != x {
                    return Err(Error::InvalidInstance(format!("point {pt} has weights {old} and {x}")));
                }
            }
        }
    }
    CoverageInstance::weighted(sets, &weights)
}

/// Splits generated elements into good = brute-force optimum and noise =
/// the rest (noise listed by decreasing singleton value, ties by id).
fn split_by_optimum(
    payloads: Vec<CoveragePayload>,
    k: usize,
    adversary: Adversary,
    seed: u64,
) -> Result<SubmodInstance> {
    let all: Vec<Element<CoveragePayload>> = payloads
        .into_iter()
        .enumerate()
        .map(|(i, p)| Element::new(ElementId(i as u32), p))
        .collect();
    let function = coverage_from_payloads(all.iter())?;
    let oracle = Oracle::new(&function);
    let opt = brute_force_opt(&oracle, &GroundSet::full(all.len()), k)?;
    let (good, mut noise): (Vec<_>, Vec<_>) = all.into_iter().partition(|e| opt.elements.contains(&e.id));
    let single = |e: &Element<CoveragePayload>| oracle.eval(&[e.id]);
    noise.sort_by(|a, b| single(b).total_cmp(&single(a)).then(a.id.cmp(&b.id)));
    if adversary == Adversary::None {
        noise.clear();
    }
    let split = InstanceSplit::new(good, noise)?;
    let plan = adversary.plan(split.good().len(), &split.noise_ids(), seed)?;
    Ok(SubmodInstance {
        split,
        plan,
        function,
        k,
        opt,
    })
}

/// Generates a coverage instance. Generated ground sets have at most
/// [`MAX_GENERATED_ELEMENTS`] elements.
///
/// * `four-rectangles`: the four-rectangle instance, all elements good, `k = 2`.
/// * `random-coverage`: `n` random subsets of a `universe`-point universe,
///   each point kept with probability `density`.
/// * `decoy-front`: `k` disjoint weighted blocks of `block` points are the
///   optimum; each of the `n` decoys covers one block minus its lightest
///   point, so its value sits just below that block's.
pub fn generate_submod_instance(
    kind: SubmodKind,
    params: &GeneratorParams,
    adversary: Adversary,
    seed: u64,
) -> Result<SubmodInstance> {
    let mut rng = SeededRng::substream(seed, 1);
    match kind {
        SubmodKind::FourRectangles => {
            let f = CoverageInstance::four_rectangles();
            let good = (0..4)
                .map(|i| {
                    let id = ElementId(i);
                    Element::new(
                        id,
                        CoveragePayload {
                            points: f.points_of(id),
                            weights: None,
                        },
                    )
                })
                .collect();
            SubmodInstance::from_parts(InstanceSplit::new(good, Vec::new())?, InjectionPlan::empty(), 2)
        }
        SubmodKind::RandomCoverage => {
            let GeneratorParams {
                n,
                k,
                universe,
                density,
                ..
            } = *params;
            check_guard("ground set", n, MAX_GENERATED_ELEMENTS)?;
            if k == 0 || k > n || universe == 0 || !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidInput(format!(
                    "random-coverage needs 1 ≤ k ≤ n, universe ≥ 1, density in [0, 1] (k={k}, n={n}, universe={universe}, density={density})"
                )));
            }
            let payloads = (0..n)
                .map(|_| {
                    let mut points: Vec<u64> = (0..universe as u64).filter(|_| rng.chance(density)).collect();
                    if points.is_empty() {
                        points.push(rng.below(universe) as u64);
                    }
                    CoveragePayload { points, weights: None }
                })
                .collect();
            split_by_optimum(payloads, k, adversary, seed)
        }
        SubmodKind::DecoyFront => {
            let GeneratorParams { n, k, block, .. } = *params;
            check_guard("ground set", n + k, MAX_GENERATED_ELEMENTS)?;
            if k == 0 || block < 2 {
                return Err(Error::InvalidInput("decoy-front needs k ≥ 1 and block ≥ 2".into()));
            }
            let mut blocks: Vec<(Vec<u64>, Vec<f64>)> = Vec::with_capacity(k);
            for b in 0..k {
                let points: Vec<u64> = (0..block).map(|j| (b * block + j) as u64).collect();
                // Quarter-unit weights in [1, 2]: exact in binary.
                let weights: Vec<f64> = points.iter().map(|_| 1.0 + rng.below(5) as f64 / 4.0).collect();
                blocks.push((points, weights));
            }
            let mut payloads: Vec<CoveragePayload> = blocks
                .iter()
                .map(|(p, w)| CoveragePayload {
                    points: p.clone(),
                    weights: Some(w.clone()),
                })
                .collect();
            for d in 0..n {
                let (p, w) = &blocks[d % k];
                let lightest = (0..p.len()).min_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
                let keep: Vec<usize> = (0..p.len()).filter(|&i| i != lightest).collect();
                payloads.push(CoveragePayload {
                    points: keep.iter().map(|&i| p[i]).collect(),
                    weights: Some(keep.iter().map(|&i| w[i]).collect()),
                });
            }
            split_by_optimum(payloads, k, adversary, seed)
        }
    }
}

fn check_guard(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::SizeLimit {
            what,
            actual: actual as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Reads a submodular instance file: either the instance format with
/// `{"points", "weights"?}` payloads or a plain coverage file (all good).
pub fn read_submod_file(path: &Path, k: usize) -> Result<SubmodInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let probe: serde_json::Value = serde_json::from_str(first).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    if probe.get("role").is_some() || probe.get("slots").is_some() {
        let (split, plan) = read_instance(text.as_bytes())?;
        return SubmodInstance::from_parts(split, plan, k);
    }
    let f = CoverageInstance::read_jsonl(text.as_bytes())?;
    let good = (0..f.ground_size() as u32)
        .map(|i| {
            Element::new(
                ElementId(i),
                CoveragePayload {
                    points: f.points_of(ElementId(i)),
                    weights: None,
                },
            )
        })
        .collect();
    SubmodInstance::from_parts(InstanceSplit::new(good, Vec::new())?, InjectionPlan::empty(), k)
}

// ---------------------------------------------------------------------------
// Matching instances

/// An edge instance whose good set is a maximum matching of the whole
/// graph.
#[derive(Debug, Clone)]
pub struct MatchingInstance {
    pub split: InstanceSplit<[u64; 2]>,
    pub plan: InjectionPlan,
    pub opt_size: usize,
}

impl MatchingInstance {
    /// Checks the good set is a maximum matching and builds the instance.
    pub fn from_parts(split: InstanceSplit<[u64; 2]>, plan: InjectionPlan) -> Result<Self> {
        plan.validate(&split)?;
        let good = payload_edges(split.good())?;
        Matching::from_edges(&good).map_err(|_| Error::InvalidInstance("good edges do not form a matching".into()))?;
        let all: Vec<Edge> = good.iter().copied().chain(payload_edges(split.noise())?).collect();
        let opt_size = matching::exact_max_matching(&all)?.len();
        if opt_size != good.len() {
            return Err(Error::InvalidInstance(format!(
                "good matching has {} edges, maximum is {opt_size}",
                good.len()
            )));
        }
        Ok(Self { split, plan, opt_size })
    }

    pub fn stream(&self, seed: u64) -> Result<Vec<Edge>> {
        stream_edges(&build_stream(&self.split, &self.plan, seed)?)
    }
}

fn payload_edges(elements: &[Element<[u64; 2]>]) -> Result<Vec<Edge>> {
    elements.iter().map(|e| Edge::new(e.payload[0], e.payload[1])).collect()
}

/// Edges of a realized stream in arrival order.
pub fn stream_edges(stream: &InjectedStream<[u64; 2]>) -> Result<Vec<Edge>> {
    stream
        .elements()
        .map(|e| Edge::new(e.payload[0], e.payload[1]))
        .collect()
}

/// Builds a split from good and noise edge lists; ids are assigned good
/// first.
pub fn edge_split(good: &[Edge], noise: &[Edge]) -> Result<InstanceSplit<[u64; 2]>> {
    let elem = |i: usize, e: &Edge| Element::new(ElementId(i as u32), [e.u(), e.v()]);
    InstanceSplit::new(
        good.iter().enumerate().map(|(i, e)| elem(i, e)).collect(),
        noise.iter().enumerate().map(|(i, e)| elem(good.len() + i, e)).collect(),
    )
}

/// Splits an arbitrary edge list into good = a maximum matching and noise
/// = the remaining distinct edges.
pub fn split_edges_by_maximum(edges: &[Edge], adversary: Adversary, seed: u64) -> Result<MatchingInstance> {
    let m_star = matching::exact_max_matching(edges)?;
    let good = m_star.edges();
    let mut seen: HashSet<Edge> = good.iter().copied().collect();
    let noise: Vec<Edge> = if adversary == Adversary::None {
        Vec::new()
    } else {
        edges.iter().copied().filter(|e| seen.insert(*e)).collect()
    };
    let split = edge_split(&good, &noise)?;
    let plan = adversary.plan(good.len(), &split.noise_ids(), seed)?;
    Ok(MatchingInstance {
        opt_size: good.len(),
        split,
        plan,
    })
}

/// A frozen matching with a suffix of edges containing planted
/// vertex-disjoint 3-augmenting paths.
#[derive(Debug, Clone)]
pub struct PlantedCase {
    pub base: Matching,
    pub suffix: Vec<Edge>,
    pub planted: usize,
}

/// Matched edges `(2i, 2i+1)` for `i < size`; a `fraction` of them get two
/// private wings. Hub vertices connect to random matched vertices and
/// compete for wing slots; matched-matched and free-free edges add noise.
/// The suffix is shuffled.
pub fn planted_case(size: usize, fraction: f64, hubs: usize, seed: u64) -> Result<PlantedCase> {
    if size == 0 || !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidInput(
            "planted case needs size ≥ 1 and fraction in [0, 1]".into(),
        ));
    }
    let mut rng = SeededRng::substream(seed, 2);
    let n = size as u64;
    let base = Matching::from_edges(
        &(0..n)
            .map(|i| Edge::new(2 * i, 2 * i + 1))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let planted = ((fraction * size as f64) - 1e-9).ceil() as usize;
    let mut order: Vec<u64> = (0..n).collect();
    rng.shuffle(&mut order);
    let free = |j: u64| 2 * n + j;
    let mut suffix = Vec::new();
    for (j, &i) in order.iter().take(planted).enumerate() {
        let j = j as u64;
        suffix.push(Edge::new(free(2 * j), 2 * i)?);
        suffix.push(Edge::new(2 * i + 1, free(2 * j + 1))?);
    }
    let hub_base = 2 * n + 2 * planted as u64;
    for h in 0..hubs as u64 {
        for _ in 0..size {
            suffix.push(Edge::new(hub_base + h, rng.below(2 * size) as u64)?);
        }
    }
    for _ in 0..size {
        let (a, b) = (rng.below(2 * size) as u64, rng.below(2 * size) as u64);
        if a != b {
            suffix.push(Edge::new(a, b)?);
        }
        let (a, b) = (
            hub_base + hubs as u64 + rng.below(size) as u64,
            hub_base + hubs as u64 + rng.below(size) as u64,
        );
        if a != b {
            suffix.push(Edge::new(a, b)?);
        }
    }
    rng.shuffle(&mut suffix);
    Ok(PlantedCase { base, suffix, planted })
}

/// Generates an edge instance.
///
/// * `random-bipartite`: `edges` random distinct edges between two sides of
///   `side` vertices.
/// * `planted`: `size` middle edges `(a, b)` of which a `fraction` gets
///   private wings `x – a`, `b – y`; planted middles are noise, wings and
///   the remaining middles are good.
/// * `greedy-trap`: `size` gadgets `x – a – b – y`; the middle edge of a
///   `fraction` of gadgets is noise, the wings are good.
pub fn generate_matching_instance(
    kind: MatchingKind,
    params: &GeneratorParams,
    adversary: Adversary,
    seed: u64,
) -> Result<MatchingInstance> {
    let mut rng = SeededRng::substream(seed, 3);
    match kind {
        MatchingKind::RandomBipartite => {
            let (side, m) = (params.side, params.edges);
            check_guard("bipartite side", side, matching::MAX_BIPARTITE_VERTICES / 2)?;
            if side == 0 || m > side * side {
                return Err(Error::InvalidInput(format!(
                    "cannot place {m} edges between sides of {side}"
                )));
            }
            let mut seen = HashSet::new();
            let mut edges = Vec::with_capacity(m);
            while edges.len() < m {
                let e = Edge::new(rng.below(side) as u64, (side + rng.below(side)) as u64)?;
                if seen.insert(e) {
                    edges.push(e);
                }
            }
            split_edges_by_maximum(&edges, adversary, seed)
        }
        MatchingKind::Planted | MatchingKind::GreedyTrap => {
            let g = params.size;
            if g == 0 || !(0.0..=1.0).contains(&params.fraction) {
                return Err(Error::InvalidInput(
                    "gadget generators need size ≥ 1 and fraction in [0, 1]".into(),
                ));
            }
            let marked = ((params.fraction * g as f64) - 1e-9).ceil() as usize;
            let mut good = Vec::new();
            let mut noise = Vec::new();
            for i in 0..g as u64 {
                let (x, a, b, y) = (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3);
                let middle = Edge::new(a, b)?;
                let wings = [Edge::new(x, a)?, Edge::new(b, y)?];
                let is_marked = (i as usize) < marked;
                match (kind, is_marked) {
                    (_, true) => {
                        good.extend(wings);
                        noise.push(middle);
                    }
                    (MatchingKind::Planted, false) => good.push(middle),
                    _ => good.extend(wings),
                }
            }
            if adversary == Adversary::None {
                noise.clear();
            }
            let split = edge_split(&good, &noise)?;
            let plan = adversary.plan(good.len(), &split.noise_ids(), seed)?;
            MatchingInstance::from_parts(split, plan)
        }
    }
}

/// Reads either the instance format (payload `[u, v]`) or a plain edge
/// stream, whose edges are all treated as good.
pub fn read_matching_file(path: &Path) -> Result<MatchingInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with('{') {
        let (split, plan) = read_instance(text.as_bytes())?;
        return MatchingInstance::from_parts(split, plan);
    }
    let edges = matching::read_edge_stream(text.as_bytes())?;
    let mut seen = HashSet::new();
    let distinct: Vec<Edge> = edges.into_iter().filter(|e| seen.insert(*e)).collect();
    let opt_size = matching::exact_max_matching(&distinct)?.len();
    let split = edge_split(&distinct, &[])?;
    Ok(MatchingInstance {
        split,
        plan: InjectionPlan::empty(),
        opt_size,
    })
}

// ---------------------------------------------------------------------------
// Experiments

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    #[default]
    Submod,
    Matching,
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GainMode {
    #[default]
    Exact,
    Bucketed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GuessMode {
    #[default]
    Known,
    Auto,
}

impl GuessMode {
    fn as_str(self) -> &'static str {
        match self {
            GuessMode::Known => "known",
            GuessMode::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMode {
    Greedy,
    #[default]
    Match,
    Guessed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubmodParams {
    pub kind: SubmodKind,
    pub k: usize,
    pub delta: f64,
    pub mode: GainMode,
    pub guess: GuessMode,
}

impl Default for SubmodParams {
    fn default() -> Self {
        Self {
            kind: SubmodKind::default(),
            k: 3,
            delta: 0.1,
            mode: GainMode::Exact,
            guess: GuessMode::Known,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchingParams {
    pub kind: MatchingKind,
    pub mode: MatchMode,
    pub mstar: GuessMode,
    pub epsilon: f64,
    pub delta_guess: f64,
    pub store_small_graphs: bool,
}

impl Default for MatchingParams {
    fn default() -> Self {
        let c = MatchConfig::default();
        Self {
            kind: MatchingKind::default(),
            mode: MatchMode::Match,
            mstar: GuessMode::Known,
            epsilon: c.epsilon,
            delta_guess: c.delta_guess,
            store_small_graphs: false,
        }
    }
}

impl MatchingParams {
    pub fn config(&self) -> MatchConfig {
        MatchConfig {
            delta_guess: self.delta_guess,
            store_small_graphs: self.store_small_graphs,
            ..MatchConfig::with_epsilon(self.epsilon)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecurrenceParams {
    pub t: f64,
    pub k_max: usize,
    /// Certify `R(k, k) ≥ bound` exactly for `k ≤ certify`.
    pub certify: Option<usize>,
    pub bound: f64,
}

impl Default for RecurrenceParams {
    fn default() -> Self {
        Self {
            t: recurrence::DEFAULT_T,
            k_max: 1000,
            certify: None,
            bound: 0.5506,
        }
    }
}

/// Full description of an experiment; loads from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub seed: u64,
    /// Generated instances (ignored with an instance file).
    pub trials: usize,
    /// Sampled permutations per instance.
    pub perms: usize,
    /// Enumerate every permutation instead of sampling (|good| ≤ 8).
    pub all_perms: bool,
    pub instance: Option<PathBuf>,
    pub adversary: Adversary,
    pub generator: GeneratorParams,
    pub submod: SubmodParams,
    pub matching: MatchingParams,
    pub recurrence: RecurrenceParams,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Submod,
            seed: 0,
            trials: 1,
            perms: 10,
            all_perms: false,
            instance: None,
            adversary: Adversary::Front,
            generator: GeneratorParams::default(),
            submod: SubmodParams::default(),
            matching: MatchingParams::default(),
            recurrence: RecurrenceParams::default(),
            out: None,
            summary: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    /// Output paths do not contribute.
    pub fn fingerprint(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.summary = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// One submodular trial (one stream). Wall time is kept out of the CSV so
/// that replays are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmodRecord {
    pub seed: u64,
    pub perm_index: usize,
    pub guess_mode: String,
    pub best_value: f64,
    pub opt_value: f64,
    pub ratio: f64,
    pub nodes_live_max: usize,
    pub oracle_calls: u64,
    pub live_guesses_max: usize,
    pub trial: usize,
    pub adversary: String,
    pub config_fingerprint: String,
    #[serde(skip)]
    pub wall_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingRecord {
    pub seed: u64,
    pub perm_index: usize,
    pub algo: String,
    pub size: usize,
    pub opt_size: usize,
    pub ratio: f64,
    pub greedy_size: usize,
    pub paths_found: usize,
    pub collector_peak_slots: usize,
    pub live_guesses_max: usize,
    pub trial: usize,
    pub adversary: String,
    pub config_fingerprint: String,
    #[serde(skip)]
    pub wall_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRecord {
    pub k: usize,
    #[serde(rename = "R(k,k)")]
    pub value: f64,
    pub argmin_tag_at_diag: String,
    pub config_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Records {
    Submod(Vec<SubmodRecord>),
    Matching(Vec<MatchingRecord>),
    Recurrence(Vec<DiagonalRecord>),
}

impl Records {
    pub fn len(&self) -> usize {
        match self {
            Records::Submod(r) => r.len(),
            Records::Matching(r) => r.len(),
            Records::Recurrence(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn ratios(&self) -> Vec<(usize, f64)> {
        match self {
            Records::Submod(r) => r.iter().map(|x| (x.trial, x.ratio)).collect(),
            Records::Matching(r) => r.iter().map(|x| (x.trial, x.ratio)).collect(),
            Records::Recurrence(_) => Vec::new(),
        }
    }

    /// CSV bytes with a header row.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        fn write<T: Serialize>(rows: &[T], header: &[&str]) -> Result<Vec<u8>> {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(header).map_err(csv_err)?;
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
        match self {
            Records::Submod(r) => write(
                r,
                &[
                    "seed",
                    "perm_index",
                    "guess_mode",
                    "best_value",
                    "opt_value",
                    "ratio",
                    "nodes_live_max",
                    "oracle_calls",
                    "live_guesses_max",
                    "trial",
                    "adversary",
                    "config_fingerprint",
                ],
            ),
            Records::Matching(r) => write(
                r,
                &[
                    "seed",
                    "perm_index",
                    "algo",
                    "size",
                    "opt_size",
                    "ratio",
                    "greedy_size",
                    "paths_found",
                    "collector_peak_slots",
                    "live_guesses_max",
                    "trial",
                    "adversary",
                    "config_fingerprint",
                ],
            ),
            Records::Recurrence(r) => write(r, &["k", "R(k,k)", "argmin_tag_at_diag", "config_fingerprint"]),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub count: usize,
    pub mean: f64,
    pub stddev: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub min: f64,
    pub max: f64,
}

impl RatioStats {
    /// Sample statistics; the interval is the normal approximation.
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let stddev = var.sqrt();
        let half = 1.96 * stddev / (n as f64).sqrt();
        Some(Self {
            count: n,
            mean,
            stddev,
            ci95_low: mean - half,
            ci95_high: mean + half,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub perm_index: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub holds: bool,
    pub k_max: usize,
    pub bound: f64,
    pub min_value: f64,
    pub argmin_k: usize,
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problem: Problem,
    pub config_fingerprint: String,
    pub records: usize,
    pub ratio: Option<RatioStats>,
    /// Mean ratio per trial, in trial order.
    pub per_trial: Vec<(usize, RatioStats)>,
    pub failures: Vec<TrialFailure>,
    pub certificate: Option<CertificateSummary>,
    pub wall_secs: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub records: Records,
    pub summary: Summary,
}

impl ExperimentReport {
    /// False when any trial failed or a certification was violated.
    pub fn success(&self) -> bool {
        self.summary.failures.is_empty() && self.summary.certificate.as_ref().is_none_or(|c| c.holds)
    }
}

/// Permutation seeds and indices for one instance.
fn stream_plan(cfg: &ExperimentConfig, trial: usize, good_len: usize) -> Result<Vec<(usize, u64)>> {
    if cfg.all_perms {
        check_guard("enumerated good set", good_len, crate::stream::MAX_ENUMERATED_GOOD)?;
        let count: usize = (1..=good_len).product();
        return Ok((0..count).map(|i| (i, i as u64)).collect());
    }
    Ok((0..cfg.perms)
        .map(|p| (p, derive_seed(cfg.seed, trial as u64 + 1, p as u64)))
        .collect())
}

fn streams_for<P: Clone>(
    cfg: &ExperimentConfig,
    split: &InstanceSplit<P>,
    plan: &InjectionPlan,
    trial: usize,
) -> Result<Vec<(usize, Result<InjectedStream<P>>)>> {
    if cfg.all_perms {
        return Ok(enumerate_streams(split, plan)?
            .into_iter()
            .map(Ok)
            .enumerate()
            .collect());
    }
    Ok(stream_plan(cfg, trial, split.good().len())?
        .into_iter()
        .map(|(i, seed)| (i, build_stream(split, plan, seed)))
        .collect())
}

/// The instance for `trial`: the configured file, or a generated instance
/// seeded from `(seed, trial)`.
pub fn submod_instance_for(cfg: &ExperimentConfig, trial: usize) -> Result<SubmodInstance> {
    match &cfg.instance {
        Some(path) => read_submod_file(path, cfg.submod.k),
        None => {
            let mut params = cfg.generator.clone();
            params.k = cfg.submod.k;
            generate_submod_instance(
                cfg.submod.kind,
                &params,
                cfg.adversary,
                derive_seed(cfg.seed, 0, trial as u64),
            )
        }
    }
}

pub fn matching_instance_for(cfg: &ExperimentConfig, trial: usize) -> Result<MatchingInstance> {
    match &cfg.instance {
        Some(path) => read_matching_file(path),
        None => generate_matching_instance(
            cfg.matching.kind,
            &cfg.generator,
            cfg.adversary,
            derive_seed(cfg.seed, 0, trial as u64),
        ),
    }
}

/// Runs the configured algorithm on one submodular stream.
pub fn run_submod_stream(
    inst: &SubmodInstance,
    stream: &InjectedStream<CoveragePayload>,
    params: &SubmodParams,
) -> Result<crate::tree::RunOutcome> {
    let oracle = Oracle::new(&inst.function);
    let bucketed = params.mode == GainMode::Bucketed;
    match params.guess {
        GuessMode::Known => {
            let config = if bucketed {
                TreeConfig::bucketed(params.k, params.delta, inst.opt.value)?
            } else {
                TreeConfig::exact(params.k)
            };
            Ok(tree_run(stream.elements(), config, &oracle).1)
        }
        GuessMode::Auto => Ok(guess_run_with(stream.elements(), params.k, params.delta, bucketed, &oracle)?.1),
    }
}

/// Runs the configured matching algorithm on one edge stream. Returns the
/// outcome and the algorithm label.
pub fn run_matching_stream(
    edges: &[Edge],
    opt_size: usize,
    params: &MatchingParams,
) -> Result<(matching::MatchOutcome, &'static str)> {
    let cfg = params.config();
    match (params.mode, params.mstar) {
        (MatchMode::Greedy, _) => {
            let m = matching::greedy(edges);
            Ok((
                matching::MatchOutcome {
                    greedy_size: m.len(),
                    branch2_size: 0,
                    phase1_size: 0,
                    paths_found: 0,
                    collector_peak_slots: 0,
                    live_guesses_max: 0,
                    matching: m,
                },
                "greedy",
            ))
        }
        (MatchMode::Match, GuessMode::Known) => Ok((matching::match_run(edges, opt_size.max(1), &cfg)?, "match")),
        _ => Ok((matching::geometric_guess_run(edges, &cfg)?, "guessed")),
    }
}

fn ratio(value: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        value / opt
    } else {
        1.0
    }
}

/// Runs every trial of `cfg`. Per-trial errors are recorded as failures;
/// only configuration errors abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let fp = cfg.fingerprint();
    let mut failures = Vec::new();
    let mut certificate = None;
    let trials = if cfg.instance.is_some() { 1 } else { cfg.trials };
    let records = match cfg.problem {
        Problem::Submod => {
            let mut rows = Vec::new();
            for trial in 0..trials {
                let inst = match submod_instance_for(cfg, trial) {
                    Ok(i) => i,
                    Err(e) => {
                        failures.push(TrialFailure {
                            trial,
                            perm_index: None,
                            message: e.to_string(),
                        });
                        continue;
                    }
                };
                for (perm_index, stream) in streams_for(cfg, &inst.split, &inst.plan, trial)? {
                    let t0 = Instant::now();
                    let out = stream.and_then(|s| run_submod_stream(&inst, &s, &cfg.submod).map(|o| (s.seed(), o)));
                    match out {
                        Ok((seed, o)) => rows.push(SubmodRecord {
                            seed,
                            perm_index,
                            guess_mode: cfg.submod.guess.as_str().into(),
                            best_value: o.solution.value,
                            opt_value: inst.opt.value,
                            ratio: ratio(o.solution.value, inst.opt.value),
                            nodes_live_max: o.nodes_live_max,
                            oracle_calls: o.oracle_calls,
                            live_guesses_max: o.live_guesses_max,
                            trial,
                            adversary: cfg.adversary.name(),
                            config_fingerprint: fp.clone(),
                            wall_secs: t0.elapsed().as_secs_f64(),
                        }),
                        Err(e) => failures.push(TrialFailure {
                            trial,
                            perm_index: Some(perm_index),
                            message: e.to_string(),
                        }),
                    }
                }
            }
            Records::Submod(rows)
        }
        Problem::Matching => {
            cfg.matching.config().validate()?;
            let mut rows = Vec::new();
            for trial in 0..trials {
                let inst = match matching_instance_for(cfg, trial) {
                    Ok(i) => i,
                    Err(e) => {
                        failures.push(TrialFailure {
                            trial,
                            perm_index: None,
                            message: e.to_string(),
                        });
                        continue;
                    }
                };
                for (perm_index, stream) in streams_for(cfg, &inst.split, &inst.plan, trial)? {
                    let t0 = Instant::now();
                    let out = stream.and_then(|s| {
                        let edges = stream_edges(&s)?;
                        run_matching_stream(&edges, inst.opt_size, &cfg.matching).map(|o| (s.seed(), o))
                    });
                    match out {
                        Ok((seed, (o, algo))) => rows.push(MatchingRecord {
                            seed,
                            perm_index,
                            algo: algo.into(),
                            size: o.matching.len(),
                            opt_size: inst.opt_size,
                            ratio: ratio(o.matching.len() as f64, inst.opt_size as f64),
                            greedy_size: o.greedy_size,
                            paths_found: o.paths_found,
                            collector_peak_slots: o.collector_peak_slots,
                            live_guesses_max: o.live_guesses_max,
                            trial,
                            adversary: cfg.adversary.name(),
                            config_fingerprint: fp.clone(),
                            wall_secs: t0.elapsed().as_secs_f64(),
                        }),
                        Err(e) => failures.push(TrialFailure {
                            trial,
                            perm_index: Some(perm_index),
                            message: e.to_string(),
                        }),
                    }
                }
            }
            Records::Matching(rows)
        }
        Problem::Recurrence => {
            let p = &cfg.recurrence;
            if let Some(k_max) = p.certify {
                let bound = Ratio64::from_decimal(p.bound)?;
                let c = recurrence::certify_exact(Ratio64::from_decimal(p.t)?, k_max, bound)?;
                certificate = Some(CertificateSummary {
                    holds: c.holds(),
                    k_max,
                    bound: p.bound,
                    min_value: c.min_value,
                    argmin_k: c.argmin_k,
                    violations: c.violations.clone(),
                });
            }
            Records::Recurrence(
                recurrence::diagonal_f64(p.t, p.k_max)?
                    .into_iter()
                    .map(|d| DiagonalRecord {
                        k: d.k,
                        value: d.value,
                        argmin_tag_at_diag: d.tag.as_str().into(),
                        config_fingerprint: fp.clone(),
                    })
                    .collect(),
            )
        }
    };
    let ratios = records.ratios();
    let mut per_trial = Vec::new();
    for trial in 0..trials {
        let v: Vec<f64> = ratios.iter().filter(|(t, _)| *t == trial).map(|(_, r)| *r).collect();
        if let Some(s) = RatioStats::of(&v) {
            per_trial.push((trial, s));
        }
    }
    let all: Vec<f64> = ratios.iter().map(|(_, r)| *r).collect();
    let summary = Summary {
        problem: cfg.problem,
        config_fingerprint: fp,
        records: records.len(),
        ratio: RatioStats::of(&all),
        per_trial,
        failures,
        certificate,
        wall_secs: start.elapsed().as_secs_f64(),
        note: ADVERSARY_NOTE.into(),
    };
    Ok(ExperimentReport { records, summary })
}

/// Writes the CSV (and the JSON summary when configured) to the resolved
/// output paths. Returns the CSV path written, if any.
pub fn write_report(cfg: &ExperimentConfig, report: &ExperimentReport) -> Result<Option<PathBuf>> {
    if let Some(path) = &cfg.summary {
        let p = resolve_output(path);
        create_parent(&p)?;
        let json = serde_json::to_string_pretty(&report.summary).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&p, json)?;
    }
    let Some(path) = &cfg.out else {
        return Ok(None);
    };
    let p = resolve_output(path);
    create_parent(&p)?;
    std::fs::write(&p, report.records.to_csv()?)?;
    Ok(Some(p))
}

fn create_parent(p: &Path) -> Result<()> {
    match p.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => Ok(std::fs::create_dir_all(dir)?),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Verification suite

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Axiom checks on every shipped set-function family (exhaustive for
/// ground sets of at most 10 elements) plus the greedy deletion check on
/// random edge streams.
pub fn verify_suite(seed: u64, instances: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut check = |name: String, f: &dyn SetFunction| {
        let oracle = Oracle::new(f);
        let report = verify_axioms(&oracle, &GroundSet::full(f.ground_size()), 2000, seed);
        out.push(CheckOutcome {
            name,
            passed: report.is_clean() && (f.ground_size() > 10 || report.exhaustive),
            detail: format!(
                "{} checks, {} violations, exhaustive={}",
                report.checked,
                report.violations.len(),
                report.exhaustive
            ),
        });
    };
    check("coverage/four-rectangles".into(), &CoverageInstance::four_rectangles());
    for i in 0..instances {
        let s = derive_seed(seed, 7, i as u64);
        let mut rng = SeededRng::new(s);
        let params = GeneratorParams {
            n: 4 + rng.below(7),
            k: 2,
            universe: 6 + rng.below(14),
            density: 0.15 + 0.35 * rng.unit(),
            ..Default::default()
        };
        let inst = generate_submod_instance(SubmodKind::RandomCoverage, &params, Adversary::Front, s)?;
        check(format!("coverage/random#{i}"), &inst.function);
        let params = GeneratorParams {
            n: 1 + rng.below(6),
            k: 1 + rng.below(3),
            block: 2 + rng.below(3),
            ..Default::default()
        };
        let inst = generate_submod_instance(SubmodKind::DecoyFront, &params, Adversary::Front, s)?;
        check(format!("coverage/weighted#{i}"), &inst.function);
        let weights: Vec<f64> = (0..1 + rng.below(10)).map(|_| rng.below(100) as f64 / 8.0).collect();
        check(format!("additive#{i}"), &Additive::new(weights)?);
    }
    let mut clean = 0;
    let mut total = 0;
    for i in 0..instances {
        let mut rng = SeededRng::new(derive_seed(seed, 8, i as u64));
        let n = 2 + rng.below(8);
        let edges: Vec<Edge> = (0..rng.below(16))
            .filter_map(|_| Edge::new(rng.below(n) as u64, rng.below(n) as u64).ok())
            .collect();
        total += 1;
        if matching::robust_greedy_check(&edges).is_clean() {
            clean += 1;
        }
    }
    out.push(CheckOutcome {
        name: "greedy/delete-one".into(),
        passed: clean == total,
        detail: format!("{clean}/{total} streams clean"),
    });
    Ok(out)
}
