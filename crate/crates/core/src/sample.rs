//! Erdős–Rényi sampling and seed plumbing.
//!
//! All randomness in the crate flows from a `u64` seed through
//! [`ChaCha8Rng::seed_from_u64`]. `sample_gnp` walks the pairs `(u, v)`,
//! `u < v`, in lexicographic order, draws one `u64` per pair and keeps the
//! pair iff `(x >> 11) * 2^-53 < p`. Another implementation using the same
//! generator and the same walk reproduces the graph bit for bit.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternStats;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn unit_f64(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Samples `G(n, p)`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if unit_f64(&mut rng) < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one seed; stable across platforms and releases.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5EED_0F_7111_u64, |acc, &p| mix64(acc ^ mix64(p)))
}

pub fn shuffle<T>(items: &mut [T], rng: &mut Rng) {
    // Fisher–Yates with the same u64 → index mapping on every platform.
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Host size, threshold constant and slack for one extraction experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub c: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub p: f64,
}

impl ExperimentConfig {
    pub fn new(n: usize, c: f64, epsilon: f64, seed: u64, pattern: &PatternStats) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("threshold constant {c} must be positive")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 1)")));
        }
        Ok(Self {
            n,
            c,
            epsilon,
            seed,
            p: threshold_probability(n, c, pattern),
        })
    }
}

/// `min(1, c · n^(−1/max{m₂(H), 1}))`.
pub fn threshold_probability(n: usize, c: f64, pattern: &PatternStats) -> f64 {
    (c * (n as f64).powf(-pattern.threshold_exponent())).min(1.0)
}
