//! Tiling extraction: a cluster family, then greedy copies on what is left,
//! with leftover batches fed back through the cluster process.

use serde::{Deserialize, Serialize};

use super::cluster::{ClusterOutcome, ProbeOrder};
use super::family::{greedy_copies, maximal_cluster_family, process_batch, ClusterFamily, FamilyConfig};
use super::{Tiling, ROUNDING_SLACK, ROUNDING_TABLE_VERSION};
use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour, Graph};
use crate::pattern::PatternStats;
use crate::search::{find_mono_copy, EmbeddedCopy};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractConfig {
    pub epsilon: f64,
    /// Defaults to `ε/(2k − α)`.
    pub eta: Option<f64>,
    pub seed: u64,
    pub search_budget: u64,
    pub probe_order: ProbeOrder,
}

impl ExtractConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            eta: None,
            seed,
            search_budget: 1 << 20,
            probe_order: ProbeOrder::RedFirst,
        }
    }

    pub fn eta_for(&self, pattern: &PatternStats) -> f64 {
        self.eta.unwrap_or(self.epsilon / pattern.tie_order() as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub target_size: i64,
    pub achieved_size: usize,
    pub colour: Colour,
    pub cluster_vertices: usize,
    pub probe_failures: usize,
    pub seed: u64,
    pub eta: f64,
    pub epsilon: f64,
    pub rounding_table_version: u32,
    pub n: usize,
    pub pattern: String,
    pub target_met: bool,
    pub clusters: usize,
    /// Copies of each colour in the best tiling of that colour.
    pub red_copies: usize,
    pub blue_copies: usize,
    /// The family search stopped on budget rather than exhaustion.
    pub truncated: bool,
    /// Smallest `η` every certificate in the family satisfies, if any.
    pub achieved_eta: Option<f64>,
}

/// `⌊n/(2k−α) − εn⌋`; negative when the target is vacuous.
pub fn extraction_target(n: usize, pattern: &PatternStats, epsilon: f64) -> i64 {
    let x = n as f64 / pattern.tie_order() as f64 - epsilon * n as f64;
    (x + ROUNDING_SLACK).floor() as i64
}

/// Extracts a large monochromatic `H`-tiling. Falling short of the target is
/// reported, not an error.
pub fn extract_tiling(host: &ColouredGraph, pattern: &PatternStats, cfg: &ExtractConfig) -> Result<(Tiling, ExtractionReport)> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {}", cfg.epsilon)));
    }
    let eta = cfg.eta_for(pattern);
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("eta must be nonnegative, got {eta}")));
    }
    let n = host.n();
    let mut report = ExtractionReport {
        target_size: extraction_target(n, pattern, cfg.epsilon),
        achieved_size: 0,
        colour: Colour::Red,
        cluster_vertices: 0,
        probe_failures: 0,
        seed: cfg.seed,
        eta,
        epsilon: cfg.epsilon,
        rounding_table_version: ROUNDING_TABLE_VERSION,
        n,
        pattern: pattern.name().to_string(),
        target_met: false,
        clusters: 0,
        red_copies: 0,
        blue_copies: 0,
        truncated: false,
        achieved_eta: None,
    };

    let tiling = if pattern.ell() == 0 {
        edgeless_tiling(n, pattern.k())
    } else if pattern.k() == 2 {
        single_edges(host, pattern, cfg, &mut report)?
    } else {
        general(host, pattern, cfg, eta, &mut report)?
    };
    report.achieved_size = tiling.len();
    report.colour = tiling.colour;
    report.target_met = tiling.len() as i64 >= report.target_size;
    Ok((tiling, report))
}

fn edgeless_tiling(n: usize, k: usize) -> Tiling {
    Tiling {
        colour: Colour::Red,
        copies: (0..n / k)
            .map(|i| EmbeddedCopy {
                vertex_map: (i * k..(i + 1) * k).collect(),
                colour: Some(Colour::Red),
            })
            .collect(),
    }
}

/// `H = K₂` has `k < 3`, outside the cluster process. Two disjoint edges form a
/// `2K₂` with the same `2k − α` per edge, so extract a `2K₂`-tiling at `ε/2`
/// and split it, keeping whichever of that and a plain greedy matching is larger.
fn single_edges(
    host: &ColouredGraph,
    pattern: &PatternStats,
    cfg: &ExtractConfig,
    report: &mut ExtractionReport,
) -> Result<Tiling> {
    let two = PatternStats::new("2k2", Graph::from_edges(4, [(0, 1), (2, 3)])?)?;
    let inner_cfg = ExtractConfig {
        epsilon: cfg.epsilon / 2.0,
        eta: cfg.eta,
        ..cfg.clone()
    };
    let (paired, inner) = extract_tiling(host, &two, &inner_cfg)?;
    report.cluster_vertices = inner.cluster_vertices;
    report.probe_failures = inner.probe_failures;
    report.clusters = inner.clusters;
    report.truncated = inner.truncated;
    report.achieved_eta = inner.achieved_eta;

    let mut split = Tiling::new(paired.colour);
    for c in &paired.copies {
        for pair in c.vertex_map.chunks(2) {
            split.copies.push(EmbeddedCopy {
                vertex_map: pair.to_vec(),
                colour: Some(paired.colour),
            });
        }
    }
    let all = host.graph().vertices();
    let mut best = split;
    for colour in Colour::BOTH {
        let t = Tiling {
            colour,
            copies: greedy_copies(host, pattern, colour, &all),
        };
        record_count(report, &t);
        if t.len() > best.len() {
            best = t;
        }
    }
    record_count(report, &best);
    Ok(best)
}

fn general(
    host: &ColouredGraph,
    pattern: &PatternStats,
    cfg: &ExtractConfig,
    eta: f64,
    report: &mut ExtractionReport,
) -> Result<Tiling> {
    let n = host.n();
    let k = pattern.k();
    let fcfg = FamilyConfig {
        eta,
        seed: cfg.seed,
        search_budget: cfg.search_budget,
        probe_order: cfg.probe_order,
    };
    let mut family = maximal_cluster_family(host, pattern, &fcfg)?;
    report.probe_failures = family.probe_failures;

    let batch = ((cfg.epsilon * n as f64 / k as f64 - ROUNDING_SLACK).ceil() as usize).max(2);
    let mut covered = family.covered(n);
    let mut leftover = mixed_greedy(host, pattern, &host.graph().vertices().difference(&covered));
    if eta > 0.0 {
        for round in 1u64.. {
            let red: Vec<_> = leftover.iter().filter(|c| c.colour == Some(Colour::Red)).cloned().collect();
            let blue: Vec<_> = leftover.iter().filter(|c| c.colour == Some(Colour::Blue)).cloned().collect();
            if red.len() < batch || blue.len() < batch {
                break;
            }
            // Round 0 seeds belong to the family builder.
            match process_batch(host, pattern, &red, &blue, batch, &fcfg, round << 32)? {
                Some(ClusterOutcome::Success { certificate, .. }) => {
                    covered.union_with(&certificate.vertex_set(n));
                    family.certificates.push(certificate);
                    leftover = mixed_greedy(host, pattern, &host.graph().vertices().difference(&covered));
                }
                Some(ClusterOutcome::Failure(_)) => {
                    report.probe_failures += 1;
                    break;
                }
                None => break,
            }
        }
    }
    report.cluster_vertices = covered.len();
    report.clusters = family.certificates.len();
    report.truncated = family.truncated;
    report.achieved_eta = family
        .certificates
        .iter()
        .map(|c| c.tightest_eta(pattern))
        .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));

    let uncovered = host.graph().vertices().difference(&covered);
    let all = host.graph().vertices();
    let mut best: Option<Tiling> = None;
    for colour in Colour::BOTH {
        let candidates = [
            with_family(&family, colour, leftover.iter().filter(|c| c.colour == Some(colour)).cloned()),
            with_family(&family, colour, greedy_copies(host, pattern, colour, &uncovered)),
            Tiling {
                colour,
                copies: greedy_copies(host, pattern, colour, &all),
            },
        ];
        for t in candidates {
            record_count(report, &t);
            if best.as_ref().is_none_or(|b| t.len() > b.len()) {
                best = Some(t);
            }
        }
    }
    Ok(best.expect("two colours give candidates"))
}

/// Disjoint monochromatic copies of either colour, red tried first each time.
fn mixed_greedy(host: &ColouredGraph, pattern: &PatternStats, allowed: &VertexSet) -> Vec<EmbeddedCopy> {
    let mut free = allowed.clone();
    let mut out = Vec::new();
    while free.len() >= pattern.k() {
        let Some(copy) = find_mono_copy(host, pattern, &free, None) else {
            break;
        };
        free.difference_with(&copy.vertex_set(host.n()));
        out.push(copy);
    }
    out
}

fn with_family(family: &ClusterFamily, colour: Colour, extra: impl IntoIterator<Item = EmbeddedCopy>) -> Tiling {
    let mut t = Tiling::new(colour);
    for c in &family.certificates {
        t.copies.extend(c.tiling(colour).copies.iter().cloned());
    }
    t.copies.extend(extra);
    t
}

fn record_count(report: &mut ExtractionReport, t: &Tiling) {
    let slot = match t.colour {
        Colour::Red => &mut report.red_copies,
        Colour::Blue => &mut report.blue_copies,
    };
    *slot = (*slot).max(t.len());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::validate_tiling;

    #[test]
    fn targets() {
        let k3 = PatternStats::clique(3);
        assert_eq!(extraction_target(50, &k3, 0.1), 5);
        assert_eq!(extraction_target(300, &k3, 0.15), 15);
        assert_eq!(extraction_target(10, &k3, 0.5), -3);
    }

    #[test]
    fn all_red_clique_tiles_perfectly() {
        let g = ColouredGraph::monochromatic(Graph::complete(20), Colour::Red);
        let k3 = PatternStats::clique(3);
        let (t, r) = extract_tiling(&g, &k3, &ExtractConfig::new(0.1, 0)).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.colour, Colour::Red);
        assert!(r.target_met);
        assert!(validate_tiling(&g, &k3, &t, None).is_ok());
    }

    #[test]
    fn edge_patterns() {
        let g = ColouredGraph::from_fn(Graph::complete(9), |u, _| if u < 4 { Colour::Blue } else { Colour::Red });
        let k2 = PatternStats::clique(2);
        let (t, _) = extract_tiling(&g, &k2, &ExtractConfig::new(0.1, 0)).unwrap();
        // ⌊9/3 − 0.9⌋ = 2; greedy matchings need not be maximum.
        assert!(t.len() >= 2);
        assert!(validate_tiling(&g, &k2, &t, None).is_ok());
        let k1 = PatternStats::clique(1);
        let (t, _) = extract_tiling(&g, &k1, &ExtractConfig::new(0.1, 0)).unwrap();
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn rejects_bad_epsilon() {
        let g = ColouredGraph::monochromatic(Graph::complete(4), Colour::Red);
        let k3 = PatternStats::clique(3);
        assert!(extract_tiling(&g, &k3, &ExtractConfig::new(0.0, 0)).is_err());
        assert!(extract_tiling(&g, &k3, &ExtractConfig::new(1.0, 0)).is_err());
    }

    #[test]
    fn report_serialises_required_fields() {
        let g = ColouredGraph::monochromatic(Graph::complete(6), Colour::Blue);
        let k3 = PatternStats::clique(3);
        let (_, r) = extract_tiling(&g, &k3, &ExtractConfig::new(0.2, 9)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "target_size",
            "achieved_size",
            "colour",
            "cluster_vertices",
            "probe_failures",
            "seed",
            "eta",
            "epsilon",
            "rounding_table_version",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["colour"], "blue");
    }
}
