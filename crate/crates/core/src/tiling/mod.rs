//! Tilings, clusters and the extraction algorithm.
//!
//! # Rounding
//!
//! The underlying arguments ignore integrality. Every place where this crate
//! has to pick a side is listed here; the table is versioned by
//! [`ROUNDING_TABLE_VERSION`] and the version is written into every
//! extraction report.
//!
//! | site | rule |
//! |------|------|
//! | cluster size requirement `v/(2k−α) − ηv` | `max(0, ⌈x − 1e-9⌉)`; empty tilings meet a 0 requirement |
//! | splitting `q` copies per side into halves | first half `⌊q/2⌋` copies, reserve `⌈q/2⌉` copies |
//! | process loop guard and probe window `η²s` | `g = max(1, ⌈η²s − 1e-9⌉)`; loop while both pools hold ≥ `g` |
//! | case thresholds `s/(2k)` | the number of copies in the first half, `⌊q/2⌋` |
//! | final size bound of the third case | `|T| < ⌊q/2⌋(2k − α) + g` |
//! | extraction target `n/(2k−α) − εn` | `⌊x + 1e-9⌋` (may be negative) |
//! | leftover batch size `εn/k` | `max(2, ⌈εn/k − 1e-9⌉)` copies per colour |
//! | default `η` | `ε/(2k − α)`, unrounded |

mod cluster;
mod extract;
mod family;
mod probe;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColouredGraph, Colour};
use crate::pattern::PatternStats;
use crate::search::EmbeddedCopy;
use crate::vertex_set::VertexSet;

pub use cluster::{
    cluster_process, verify_cluster, AssemblyCase, ClusterCertificate, ClusterOutcome, FailureReason, FailureReport,
    ProbeOrder, ProcessConfig, ProcessState, ProcessTrace, SizeCheck, StepKind, StepSnapshot,
};
pub use extract::{extract_tiling, extraction_target, ExtractConfig, ExtractionReport};
pub use family::{greedy_copies, greedy_tiling, maximal_cluster_family, ClusterFamily, FamilyConfig};
pub use probe::{find_bowtie, find_tie, richness_probe, GoodCopy, SideHit, TieSearch};

pub const ROUNDING_TABLE_VERSION: u32 = 1;

pub(crate) const ROUNDING_SLACK: f64 = 1e-9;

/// A colour together with vertex-disjoint copies of `H` in that colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub colour: Colour,
    pub copies: Vec<EmbeddedCopy>,
}

impl Tiling {
    pub fn new(colour: Colour) -> Self {
        Self {
            colour,
            copies: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        let mut s = VertexSet::new(universe);
        for c in &self.copies {
            for &v in &c.vertex_map {
                s.insert(v);
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingViolation {
    #[error("copy {0} is not an embedding of the pattern")]
    NotACopy(usize),
    #[error("copy {0} is not monochromatic in the tiling colour")]
    WrongColour(usize),
    #[error("copy {0} shares a vertex with an earlier copy")]
    Overlap(usize),
    #[error("copy {0} leaves the permitted vertex set")]
    Outside(usize),
}

/// Re-checks a tiling against the raw coloured edge data: every copy is an
/// injective edge-preserving image of `H`, monochromatic in the tiling colour,
/// inside `within` when given, and copies are pairwise vertex-disjoint.
pub fn validate_tiling(
    host: &ColouredGraph,
    pattern: &PatternStats,
    tiling: &Tiling,
    within: Option<&VertexSet>,
) -> Result<(), TilingViolation> {
    let mut seen = VertexSet::new(host.n());
    for (i, copy) in tiling.copies.iter().enumerate() {
        let classified =
            EmbeddedCopy::classify(host, pattern.graph(), &copy.vertex_map).ok_or(TilingViolation::NotACopy(i))?;
        if pattern.ell() > 0 && classified.colour != Some(tiling.colour) {
            return Err(TilingViolation::WrongColour(i));
        }
        for &v in &copy.vertex_map {
            if within.is_some_and(|w| !w.contains(v)) {
                return Err(TilingViolation::Outside(i));
            }
            if !seen.insert(v) {
                return Err(TilingViolation::Overlap(i));
            }
        }
    }
    Ok(())
}

/// Copies each tiling of an `(H, η)`-cluster on `order` vertices must contain:
/// `max(0, ⌈order/(2k−α) − η·order⌉)`.
pub fn required_cluster_copies(order: usize, pattern: &PatternStats, eta: f64) -> usize {
    let v = order as f64;
    let bound = v / pattern.tie_order() as f64 - eta * v;
    let ceil = (bound - ROUNDING_SLACK).ceil();
    if ceil <= 0.0 {
        0
    } else {
        ceil as usize
    }
}

/// `⌈x − slack⌉` for nonnegative `x`, at least 1.
pub(crate) fn window_size(x: f64) -> usize {
    ((x - ROUNDING_SLACK).ceil() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn required_copies_clamp() {
        let k3 = PatternStats::clique(3);
        assert_eq!(required_cluster_copies(5, &k3, 0.0), 1);
        assert_eq!(required_cluster_copies(3, &k3, 0.0), 1);
        assert_eq!(required_cluster_copies(3, &k3, 0.2), 0);
        assert_eq!(required_cluster_copies(40, &k3, 0.0), 8);
        assert_eq!(required_cluster_copies(41, &k3, 0.0), 9);
        assert_eq!(required_cluster_copies(41, &k3, 1.0), 0);
    }

    #[test]
    fn validator_catches_each_violation() {
        let host = ColouredGraph::from_fn(Graph::complete(6), |u, v| {
            if u < 3 && v < 3 {
                Colour::Red
            } else {
                Colour::Blue
            }
        });
        let k3 = PatternStats::clique(3);
        let copy = |m: &[usize]| EmbeddedCopy {
            vertex_map: m.to_vec(),
            colour: None,
        };
        let ok = Tiling {
            colour: Colour::Red,
            copies: vec![copy(&[0, 1, 2])],
        };
        assert_eq!(validate_tiling(&host, &k3, &ok, None), Ok(()));
        let wrong = Tiling {
            colour: Colour::Blue,
            copies: vec![copy(&[0, 1, 2])],
        };
        assert_eq!(validate_tiling(&host, &k3, &wrong, None), Err(TilingViolation::WrongColour(0)));
        let overlap = Tiling {
            colour: Colour::Blue,
            copies: vec![copy(&[3, 4, 5]), copy(&[5, 0, 4])],
        };
        assert_eq!(validate_tiling(&host, &k3, &overlap, None), Err(TilingViolation::Overlap(1)));
        let bad = Tiling {
            colour: Colour::Red,
            copies: vec![copy(&[0, 0, 1])],
        };
        assert_eq!(validate_tiling(&host, &k3, &bad, None), Err(TilingViolation::NotACopy(0)));
        let within = VertexSet::from_vertices(6, [0, 1]);
        assert_eq!(validate_tiling(&host, &k3, &ok, Some(&within)), Err(TilingViolation::Outside(0)));
    }
}
