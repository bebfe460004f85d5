//! Streaming algorithms under the adversarial-injections input model.
//!
//! The good elements of an instance arrive in uniformly random relative
//! order while an adversary injects noise elements at positions chosen
//! without seeing that order. This crate provides:
//!
//! * [`stream`]: realization of injected streams from a good/noise split and
//!   an injection plan.
//! * [`submodular`]: coverage-style monotone submodular oracles, brute-force
//!   optima and axiom verification.
//! * [`tree`]: the prefix-tree streaming algorithm for cardinality-constrained
//!   submodular maximization, with gain bucketing and parallel OPT guessing.
//! * [`recurrence`]: the three-term recurrence bounding the tree algorithm's
//!   expected ratio, in exact-rational and floating-point modes.
//! * [`matching`]: greedy and two-branch streaming maximum matching with
//!   3-augmenting-path collection, and exact matching oracles.
//! * [`harness`]: instance generators, adversary strategies, experiment
//!   orchestration and report emission used by the `advinj` CLI.

pub mod error;
pub mod harness;
pub mod matching;
pub mod recurrence;
pub mod rng;
pub mod stream;
pub mod submodular;
pub mod tree;

pub use error::{Error, Result};
