//! Seeded randomness.
//!
//! All randomness flows through [`SeededRng`], a ChaCha8 stream cipher used
//! as a counter-based generator: the output is a pure function of
//! `(seed, stream id, position)`, so experiments replay bit-exactly across
//! platforms. Independent substreams for trials are derived with
//! [`SeededRng::substream`].

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source of uniform bounded integers driving permutation sampling.
pub trait UniformSource {
    /// Uniform integer in `0..bound`; `bound > 0`.
    fn below(&mut self, bound: usize) -> usize;
}

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for substream `index` of `seed`. Substreams of one seed
    /// never overlap.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self { inner }
    }

    /// Uniform integer in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        self.inner.random_range(0..bound)
    }

    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// In-place uniform Fisher–Yates shuffle, iterating from the back:
    /// for `i` in `n-1..1`, swap `items[i]` with `items[j]`, `j` uniform in
    /// `0..=i`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        shuffle_with(self, items)
    }

    /// `count` distinct indices from `0..n` in random order.
    pub fn sample_indices(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.below(n - i);
            idx.swap(i, j);
        }
        idx.truncate(count);
        idx
    }
}

impl UniformSource for SeededRng {
    fn below(&mut self, bound: usize) -> usize {
        SeededRng::below(self, bound)
    }
}

/// Deterministic source that decodes a counter in mixed radix: each call
/// `below(b)` returns `counter % b` and divides the counter by `b`.
///
/// Driving a Fisher–Yates shuffle of `n` items with counters `0..n!` yields
/// every permutation exactly once, which makes it an enumeration oracle
/// for the shuffle.
#[derive(Debug, Clone)]
pub struct FactorialCounter {
    counter: u128,
}

impl FactorialCounter {
    pub fn new(counter: u128) -> Self {
        Self { counter }
    }
}

impl UniformSource for FactorialCounter {
    fn below(&mut self, bound: usize) -> usize {
        let b = bound as u128;
        let r = self.counter % b;
        self.counter /= b;
        r as usize
    }
}

/// Fisher–Yates over any [`UniformSource`], same draw order as
/// [`SeededRng::shuffle`].
pub fn shuffle_with<T, S: UniformSource + ?Sized>(source: &mut S, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = source.below(i + 1);
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = SeededRng::new(7);
        let mut b = SeededRng::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substreams_differ() {
        let mut a = SeededRng::substream(7, 0);
        let mut b = SeededRng::substream(7, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = SeededRng::new(3);
        let mut v: Vec<u32> = (0..50).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn factorial_counter_enumerates_all_permutations() {
        let mut seen = std::collections::HashSet::new();
        for c in 0..24u128 {
            let mut v = [0u8, 1, 2, 3];
            shuffle_with(&mut FactorialCounter::new(c), &mut v);
            seen.insert(v);
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn sample_indices_distinct() {
        let mut rng = SeededRng::new(11);
        let mut s = rng.sample_indices(20, 7);
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 7);
        assert!(s.iter().all(|&i| i < 20));
    }
}
