//! C ABI over the `advinj` library.
//!
//! Every fallible function returns an [`AdvinjStatus`]. On failure a
//! message is kept per thread and can be copied out with
//! [`advinj_last_error_message`]. Handles are opaque; release each with its
//! `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use advinj::matching::{self, Edge, MatchConfig, Matching};
use advinj::recurrence::{self, Ratio64, RecurrenceTable, Term};
use advinj::stream::{Element, ElementId};
use advinj::submodular::{brute_force_opt, CoverageInstance, GroundSet, Oracle, SetFunction};
use advinj::tree::{guess_run_with, tree_run, TreeConfig};
use advinj::Error;

/// Largest recurrence table a handle may hold.
pub const ADVINJ_MAX_TABLE_K: usize = 5000;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvinjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SizeLimit = 3,
    Precondition = 4,
    Invariant = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvinjTerm {
    None = 0,
    First = 1,
    Second = 2,
    Third = 3,
}

/// Coverage function handle.
pub struct AdvinjCoverage(CoverageInstance);

/// Matching handle.
pub struct AdvinjMatching(Matching);

/// Recurrence table handle.
pub struct AdvinjRecurrence(RecurrenceTable);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvinjTreeOptions {
    pub k: usize,
    /// Key children by gain bucket instead of exact gain.
    pub bucketed: bool,
    /// Bucketing and guessing accuracy.
    pub delta: f64,
    /// Known optimum value; a value ≤ 0 runs with OPT guessing instead.
    pub opt_guess: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdvinjTreeResult {
    pub best_value: f64,
    pub nodes_live_max: usize,
    pub oracle_calls: u64,
    pub live_guesses_max: usize,
    /// Elements in the best solution (may exceed the caller's buffer).
    pub solution_len: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdvinjMatchStats {
    pub size: usize,
    pub greedy_size: usize,
    pub branch2_size: usize,
    pub paths_found: usize,
    pub live_guesses_max: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdvinjCertificate {
    pub holds: bool,
    pub violations: usize,
    pub min_value: f64,
    pub argmin_k: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn status_of(e: &Error) -> AdvinjStatus {
    match e {
        Error::SizeLimit { .. } => AdvinjStatus::SizeLimit,
        Error::Precondition(_) => AdvinjStatus::Precondition,
        Error::Invariant(_) => AdvinjStatus::Invariant,
        Error::Io(_) => AdvinjStatus::Io,
        _ => AdvinjStatus::InvalidInput,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), Fail>) -> AdvinjStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdvinjStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            record(format!("null pointer: {what}"));
            AdvinjStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            record(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            record("internal panic".into());
            AdvinjStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn target<'a, T>(ptr: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &'static str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or(Fail::Null(what))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Core(Error::InvalidInput(msg.into()))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `cap`). Returns the full message length without
/// the terminator, or 0 when no error was recorded.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn advinj_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn advinj_status_name(status: AdvinjStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        AdvinjStatus::Ok => b"ok\0",
        AdvinjStatus::NullPointer => b"null pointer\0",
        AdvinjStatus::InvalidInput => b"invalid input\0",
        AdvinjStatus::SizeLimit => b"size limit\0",
        AdvinjStatus::Precondition => b"precondition\0",
        AdvinjStatus::Invariant => b"invariant\0",
        AdvinjStatus::Io => b"i/o\0",
        AdvinjStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

// --- coverage -------------------------------------------------------------

unsafe fn csr_sets(points: *const u64, offsets: *const usize, n_elements: usize) -> Result<Vec<Vec<u64>>, Fail> {
    let offsets = slice(offsets, n_elements + 1, "offsets")?;
    if offsets.windows(2).any(|w| w[0] > w[1]) || offsets[0] != 0 {
        return Err(invalid("offsets must start at 0 and be non-decreasing"));
    }
    let points = slice(points, offsets[n_elements], "points")?;
    Ok(offsets.windows(2).map(|w| points[w[0]..w[1]].to_vec()).collect())
}

/// Unit-weight coverage function. Element `i` covers
/// `points[offsets[i] .. offsets[i+1]]`; `offsets` has `n_elements + 1`
/// entries.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_new(
    points: *const u64,
    offsets: *const usize,
    n_elements: usize,
    out: *mut *mut AdvinjCoverage,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        let sets = csr_sets(points, offsets, n_elements)?;
        *out = Box::into_raw(Box::new(AdvinjCoverage(CoverageInstance::new(sets))));
        Ok(())
    })
}

/// Weighted coverage function; `labels[j]` has weight `weights[j]`.
///
/// # Safety
/// As [`advinj_coverage_new`]; `labels` and `weights` hold `n_weights`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_new_weighted(
    points: *const u64,
    offsets: *const usize,
    n_elements: usize,
    labels: *const u64,
    weights: *const f64,
    n_weights: usize,
    out: *mut *mut AdvinjCoverage,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        let sets = csr_sets(points, offsets, n_elements)?;
        let labels = slice(labels, n_weights, "labels")?;
        let weights = slice(weights, n_weights, "weights")?;
        let map = labels.iter().copied().zip(weights.iter().copied()).collect();
        *out = Box::into_raw(Box::new(AdvinjCoverage(CoverageInstance::weighted(sets, &map)?)));
        Ok(())
    })
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live coverage handle.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_ground_size(h: *const AdvinjCoverage) -> usize {
    h.as_ref().map_or(0, |c| c.0.ground_size())
}

fn element_ids(ids: &[u32], n: usize) -> Result<Vec<ElementId>, Fail> {
    if let Some(bad) = ids.iter().find(|&&i| i as usize >= n) {
        return Err(invalid(format!("element id {bad} outside 0..{n}")));
    }
    Ok(ids.iter().map(|&i| ElementId(i)).collect())
}

/// Evaluates the function on a set of element ids.
///
/// # Safety
/// `h` must be a live handle, `ids` must hold `len` entries and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_eval(
    h: *const AdvinjCoverage,
    ids: *const u32,
    len: usize,
    out: *mut f64,
) -> AdvinjStatus {
    guarded(|| {
        let c = handle(h, "coverage")?;
        let out = target(out, "out")?;
        let set = element_ids(slice(ids, len, "ids")?, c.0.ground_size())?;
        *out = c.0.eval(&set);
        Ok(())
    })
}

/// Brute-force optimum value over sets of at most `k` elements.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_optimum(h: *const AdvinjCoverage, k: usize, out: *mut f64) -> AdvinjStatus {
    guarded(|| {
        let c = handle(h, "coverage")?;
        let out = target(out, "out")?;
        let sol = brute_force_opt(&Oracle::new(&c.0), &GroundSet::full(c.0.ground_size()), k)?;
        *out = sol.value;
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn advinj_coverage_free(h: *mut AdvinjCoverage) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs the prefix-tree algorithm over `stream` (element ids in arrival
/// order). Up to `solution_cap` ids of the best solution are written to
/// `solution`.
///
/// # Safety
/// `h` must be a live handle; array pointers must match their lengths;
/// `opts` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn advinj_tree_run(
    h: *const AdvinjCoverage,
    stream: *const u32,
    len: usize,
    opts: *const AdvinjTreeOptions,
    solution: *mut u32,
    solution_cap: usize,
    out: *mut AdvinjTreeResult,
) -> AdvinjStatus {
    guarded(|| {
        let c = handle(h, "coverage")?;
        let opts = *handle(opts, "opts")?;
        let out = target(out, "out")?;
        if opts.k == 0 {
            return Err(Fail::Core(Error::Precondition("k must be at least 1".into())));
        }
        let ids = element_ids(slice(stream, len, "stream")?, c.0.ground_size())?;
        let elements: Vec<Element<()>> = ids.into_iter().map(|id| Element::new(id, ())).collect();
        let oracle = Oracle::new(&c.0);
        let run = if opts.opt_guess > 0.0 {
            let config = if opts.bucketed {
                TreeConfig::bucketed(opts.k, opts.delta, opts.opt_guess)?
            } else {
                TreeConfig::exact(opts.k)
            };
            tree_run(&elements, config, &oracle).1
        } else {
            guess_run_with(&elements, opts.k, opts.delta, opts.bucketed, &oracle)?.1
        };
        if solution_cap > 0 {
            if solution.is_null() {
                return Err(Fail::Null("solution"));
            }
            for (i, e) in run.solution.elements.iter().take(solution_cap).enumerate() {
                *solution.add(i) = e.0;
            }
        }
        *out = AdvinjTreeResult {
            best_value: run.solution.value,
            nodes_live_max: run.nodes_live_max,
            oracle_calls: run.oracle_calls,
            live_guesses_max: run.live_guesses_max,
            solution_len: run.solution.elements.len(),
        };
        Ok(())
    })
}

// --- matching -------------------------------------------------------------

unsafe fn edge_list(edges: *const u64, n_edges: usize) -> Result<Vec<Edge>, Fail> {
    let flat = slice(edges, 2 * n_edges, "edges")?;
    Ok(flat
        .chunks_exact(2)
        .map(|p| Edge::new(p[0], p[1]))
        .collect::<advinj::Result<_>>()?)
}

fn emit(out: &mut *mut AdvinjMatching, m: Matching) {
    *out = Box::into_raw(Box::new(AdvinjMatching(m)));
}

/// Greedy maximal matching of an edge stream given as `n_edges` `(u, v)`
/// pairs.
///
/// # Safety
/// `edges` must hold `2 * n_edges` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_greedy_matching(
    edges: *const u64,
    n_edges: usize,
    out: *mut *mut AdvinjMatching,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        emit(out, matching::greedy(&edge_list(edges, n_edges)?));
        Ok(())
    })
}

/// Two-branch streaming matching. `m_star = 0` runs with geometric guesses
/// of the optimum; `epsilon ≤ 0` selects the default. `stats` may be null.
///
/// # Safety
/// `edges` must hold `2 * n_edges` values; `out` must be writable; `stats`
/// must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_match_run(
    edges: *const u64,
    n_edges: usize,
    m_star: usize,
    epsilon: f64,
    out: *mut *mut AdvinjMatching,
    stats: *mut AdvinjMatchStats,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        let edges = edge_list(edges, n_edges)?;
        let cfg = if epsilon > 0.0 {
            MatchConfig::with_epsilon(epsilon)
        } else {
            MatchConfig::default()
        };
        let r = if m_star == 0 {
            matching::geometric_guess_run(&edges, &cfg)?
        } else {
            matching::match_run(&edges, m_star, &cfg)?
        };
        if let Some(s) = stats.as_mut() {
            *s = AdvinjMatchStats {
                size: r.matching.len(),
                greedy_size: r.greedy_size,
                branch2_size: r.branch2_size,
                paths_found: r.paths_found,
                live_guesses_max: r.live_guesses_max,
            };
        }
        emit(out, r.matching);
        Ok(())
    })
}

/// Maximum-cardinality matching (bipartite graphs, or general graphs with
/// at most 20 vertices).
///
/// # Safety
/// `edges` must hold `2 * n_edges` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_max_matching(
    edges: *const u64,
    n_edges: usize,
    out: *mut *mut AdvinjMatching,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        emit(out, matching::exact_max_matching(&edge_list(edges, n_edges)?)?);
        Ok(())
    })
}

/// Number of matched edges, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn advinj_matching_size(h: *const AdvinjMatching) -> usize {
    h.as_ref().map_or(0, |m| m.0.len())
}

/// Writes up to `cap_edges` sorted `(u, v)` pairs (`u < v`) to `out` and
/// returns the total number of edges.
///
/// # Safety
/// `h` must be a live handle; `out` must be null or hold `2 * cap_edges`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn advinj_matching_edges(h: *const AdvinjMatching, out: *mut u64, cap_edges: usize) -> usize {
    let Some(m) = h.as_ref() else { return 0 };
    let edges = m.0.edges();
    if !out.is_null() {
        for (i, e) in edges.iter().take(cap_edges).enumerate() {
            *out.add(2 * i) = e.u();
            *out.add(2 * i + 1) = e.v();
        }
    }
    edges.len()
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn advinj_matching_free(h: *mut AdvinjMatching) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// --- recurrence -----------------------------------------------------------

/// Floating-point recurrence table for `1 ≤ h ≤ k ≤ k_max`, with `k_max`
/// at most [`ADVINJ_MAX_TABLE_K`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_recurrence_new(t: f64, k_max: usize, out: *mut *mut AdvinjRecurrence) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        if k_max > ADVINJ_MAX_TABLE_K {
            return Err(Fail::Core(Error::SizeLimit {
                what: "table k_max",
                actual: k_max as u128,
                limit: ADVINJ_MAX_TABLE_K as u128,
            }));
        }
        *out = Box::into_raw(Box::new(AdvinjRecurrence(RecurrenceTable::compute(t, k_max)?)));
        Ok(())
    })
}

/// Reads `R(k, h)` and, if `tag` is non-null, the term attaining it.
///
/// # Safety
/// `h` must be a live handle; `value` must be writable; `tag` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_recurrence_get(
    table: *const AdvinjRecurrence,
    k: usize,
    h: usize,
    value: *mut f64,
    tag: *mut AdvinjTerm,
) -> AdvinjStatus {
    guarded(|| {
        let r = handle(table, "table")?;
        let value = target(value, "value")?;
        *value =
            r.0.get(k, h)
                .ok_or_else(|| Fail::Core(Error::OutOfRange(format!("cell ({k}, {h})"))))?;
        if let Some(t) = tag.as_mut() {
            *t = match r.0.tag(k, h) {
                None => AdvinjTerm::None,
                Some(Term::First) => AdvinjTerm::First,
                Some(Term::Second) => AdvinjTerm::Second,
                Some(Term::Third) => AdvinjTerm::Third,
            };
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn advinj_recurrence_free(h: *mut AdvinjRecurrence) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Exact check of `R(k, k) ≥ bound_num/bound_den` for `1 ≤ k ≤ k_max`
/// with `t = t_num/t_den`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn advinj_recurrence_certify(
    t_num: u64,
    t_den: u64,
    k_max: usize,
    bound_num: u64,
    bound_den: u64,
    out: *mut AdvinjCertificate,
) -> AdvinjStatus {
    guarded(|| {
        let out = target(out, "out")?;
        let c = recurrence::certify_exact(Ratio64::new(t_num, t_den)?, k_max, Ratio64::new(bound_num, bound_den)?)?;
        *out = AdvinjCertificate {
            holds: c.holds(),
            violations: c.violations.len(),
            min_value: c.min_value,
            argmin_k: c.argmin_k,
        };
        Ok(())
    })
}
