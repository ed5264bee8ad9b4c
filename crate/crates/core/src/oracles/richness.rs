use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::PatternStats;
use crate::sample::{derive_seed, rng_from_seed, shuffle};

use super::copies::CopyTable;
use super::good::is_good;

const SAMPLE_CAP: u128 = 1 << 16;

/// A colouring (red-edge mask over the template's lexicographic edges) and a
/// pair `(X, Y)` with no good copy in `G[X ∪ Y]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RichnessCounterexample {
    pub red_mask: u64,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RichnessVerdict {
    /// Every colouring and every pair of disjoint `s`-sets was checked.
    Exhaustive {
        rich: bool,
        colourings: u64,
        pairs: u64,
        counterexample: Option<RichnessCounterexample>,
    },
    /// Random and adversarial trials; `rich` is only "no counterexample found".
    Sampled {
        trials: u64,
        counterexample: Option<RichnessCounterexample>,
        /// One-sided 95% bound on the fraction of failing trials when none failed.
        failure_rate_upper_95: f64,
    },
}

impl RichnessVerdict {
    pub fn counterexample(&self) -> Option<&RichnessCounterexample> {
        match self {
            RichnessVerdict::Exhaustive { counterexample, .. } | RichnessVerdict::Sampled { counterexample, .. } => {
                counterexample.as_ref()
            }
        }
    }

    pub fn no_counterexample(&self) -> bool {
        self.counterexample().is_none()
    }
}

/// Decides whether every red/blue colouring of `template` is `(H, s)`-rich:
/// for all disjoint `s`-sets `X`, `Y` there is a red copy in `G[X ∪ Y]` with
/// `≥ α` vertices in `X` or a blue one with `≥ α` vertices in `Y`.
///
/// Exhaustive when colourings × ordered pairs fit `budget`; colour swap maps
/// `(X, Y)` to `(Y, X)`, so only colourings with the first edge red are
/// visited.
pub fn richness_decide(template: &Graph, pattern: &PatternStats, s: usize, budget: u128) -> Result<RichnessVerdict> {
    let n = template.n();
    let table = CopyTable::build(template, pattern.graph(), budget.max(1 << 20))?;
    let m = table.edge_count();
    if m > 64 {
        return Err(Error::TooLarge(m, 64));
    }
    let alpha = pattern.alpha();
    let has_good = |red: u64, x: u64, y: u64| table.copies.iter().any(|c| is_good(c, red, x, y, alpha));

    let pairs = disjoint_pairs(n, s);
    let colourings: u128 = if m == 0 { 1 } else { 1 << (m - 1) };
    let work = colourings.saturating_mul(pairs.len().max(1) as u128);
    if work <= budget {
        let counterexample = (0..colourings as u64).into_par_iter().find_map_first(|c| {
            let red = if m == 0 { 0 } else { 1 | (c << 1) };
            pairs.iter().find(|&&(x, y)| !has_good(red, x, y)).map(|&(x, y)| RichnessCounterexample {
                red_mask: red,
                x: bits(x),
                y: bits(y),
            })
        });
        return Ok(RichnessVerdict::Exhaustive {
            rich: counterexample.is_none(),
            colourings: colourings as u64,
            pairs: pairs.len() as u64,
            counterexample,
        });
    }

    let trials = budget.clamp(1, SAMPLE_CAP) as u64;
    let mut rng = rng_from_seed(derive_seed(&[n as u64, s as u64, pattern.k() as u64]));
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut order: Vec<usize> = (0..n).collect();
    let mut counterexample = None;
    for t in 0..trials {
        shuffle(&mut order, &mut rng);
        let x = order[..s].iter().fold(0u64, |a, &v| a | 1 << v);
        let y = order[s..2 * s].iter().fold(0u64, |a, &v| a | 1 << v);
        let noise = rand::RngCore::next_u64(&mut rng) & full;
        let red = if t % 2 == 0 { noise } else { adversarial(&table.host_edges, x, y, noise) };
        if !has_good(red, x, y) {
            counterexample = Some(RichnessCounterexample {
                red_mask: red,
                x: bits(x),
                y: bits(y),
            });
            break;
        }
    }
    let failure_rate_upper_95 = if counterexample.is_none() { 3.0 / trials as f64 } else { 1.0 };
    Ok(RichnessVerdict::Sampled {
        trials,
        counterexample,
        failure_rate_upper_95,
    })
}

/// Blue inside `X`, red inside `Y`, random elsewhere: good copies then have to
/// use cross edges.
fn adversarial(edges: &[(usize, usize)], x: u64, y: u64, noise: u64) -> u64 {
    edges.iter().enumerate().fold(0u64, |m, (i, &(u, v))| {
        let both = |s: u64| s >> u & 1 == 1 && s >> v & 1 == 1;
        let red = if both(x) {
            false
        } else if both(y) {
            true
        } else {
            noise >> i & 1 == 1
        };
        if red {
            m | 1 << i
        } else {
            m
        }
    })
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Ordered pairs of disjoint `s`-subsets of `0..n`.
fn disjoint_pairs(n: usize, s: usize) -> Vec<(u64, u64)> {
    if 2 * s > n {
        return Vec::new();
    }
    let subsets: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize == s).collect();
    let mut out = Vec::new();
    for &x in &subsets {
        for &y in &subsets {
            if x & y == 0 {
                out.push((x, y));
            }
        }
    }
    out
}
