//! Greedy tilings and a maximal family of vertex-disjoint clusters.

use serde::{Deserialize, Serialize};

use super::cluster::{cluster_process, ClusterCertificate, ClusterOutcome, ProbeOrder, ProcessConfig};
use super::probe::{find_tie, TieSearch};
use super::Tiling;
use crate::error::Result;
use crate::graph::{ColouredGraph, Colour};
use crate::pattern::PatternStats;
use crate::sample::derive_seed;
use crate::search::{find_copy, EmbeddedCopy, SearchOpts};
use crate::vertex_set::VertexSet;

/// Vertex-disjoint copies of colour `colour` inside `allowed`, taken greedily
/// in search order.
pub fn greedy_copies(host: &ColouredGraph, pattern: &PatternStats, colour: Colour, allowed: &VertexSet) -> Vec<EmbeddedCopy> {
    let mut free = allowed.clone();
    let mut out = Vec::new();
    while free.len() >= pattern.k() {
        let Some(copy) = find_copy(host, pattern, colour, &SearchOpts::within(&free)) else {
            break;
        };
        for &v in &copy.vertex_map {
            free.remove(v);
        }
        out.push(copy);
    }
    out
}

pub fn greedy_tiling(host: &ColouredGraph, pattern: &PatternStats, colour: Colour, allowed: &VertexSet) -> Tiling {
    Tiling {
        colour,
        copies: greedy_copies(host, pattern, colour, allowed),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub eta: f64,
    pub seed: u64,
    /// Anchor copies the tie search may try, summed over the whole run.
    pub search_budget: u64,
    pub probe_order: ProbeOrder,
}

impl FamilyConfig {
    pub fn new(eta: f64, seed: u64) -> Self {
        Self {
            eta,
            seed,
            search_budget: 1 << 20,
            probe_order: ProbeOrder::RedFirst,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterFamily {
    pub certificates: Vec<ClusterCertificate>,
    /// The tie search ran out of budget before showing maximality.
    pub truncated: bool,
    pub searches_used: u64,
    pub probe_failures: usize,
}

impl ClusterFamily {
    pub fn covered(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for c in &self.certificates {
            for &v in &c.vertices {
                s.insert(v);
            }
        }
        s
    }
}

/// Greedily collects vertex-disjoint clusters: first ties (a red and a blue
/// copy overlapping in `≥ α` vertices, an `(H, 0)`-cluster on `≤ 2k − α`
/// vertices), then clusters produced by the probe process from the greedy
/// red and blue tilings of what is left.
pub fn maximal_cluster_family(host: &ColouredGraph, pattern: &PatternStats, cfg: &FamilyConfig) -> Result<ClusterFamily> {
    let n = host.n();
    let mut free = host.graph().vertices();
    let mut family = ClusterFamily {
        certificates: Vec::new(),
        truncated: false,
        searches_used: 0,
        probe_failures: 0,
    };
    if pattern.ell() == 0 {
        return Ok(family);
    }

    let mut budget = cfg.search_budget;
    loop {
        match find_tie(host, pattern, &free, &mut budget) {
            TieSearch::Found { red, blue } => {
                let t = red.vertex_set(n).union(&blue.vertex_set(n));
                free.difference_with(&t);
                family.certificates.push(ClusterCertificate::new(
                    &t,
                    Tiling {
                        colour: Colour::Red,
                        copies: vec![red],
                    },
                    Tiling {
                        colour: Colour::Blue,
                        copies: vec![blue],
                    },
                    0.0,
                ));
            }
            TieSearch::Absent => break,
            TieSearch::OutOfBudget => {
                family.truncated = true;
                break;
            }
        }
    }
    family.searches_used = cfg.search_budget - budget;

    // The process needs k >= 3 and a positive window parameter; with η = 0 only ties qualify.
    if pattern.k() < 3 || cfg.eta <= 0.0 {
        return Ok(family);
    }
    for round in 0u64.. {
        let red = greedy_copies(host, pattern, Colour::Red, &free);
        let blue = greedy_copies(host, pattern, Colour::Blue, &free);
        let Some(outcome) = process_batch(host, pattern, &red, &blue, usize::MAX, cfg, round)? else {
            break;
        };
        match outcome {
            ClusterOutcome::Success { certificate, .. } => {
                free.difference_with(&certificate.vertex_set(n));
                family.certificates.push(certificate);
            }
            ClusterOutcome::Failure(_) => {
                family.probe_failures += 1;
                break;
            }
        }
    }
    Ok(family)
}

/// Runs the process on the first `q = min(|red|, |blue|, cap)` copies of each
/// colour, blue copies forming `X` and red copies forming `Y`. The greedy
/// tilings may overlap, so copies are paired off disjointly first. `None` when
/// fewer than two disjoint pairs are available.
pub(crate) fn process_batch(
    host: &ColouredGraph,
    pattern: &PatternStats,
    red: &[EmbeddedCopy],
    blue: &[EmbeddedCopy],
    cap: usize,
    cfg: &FamilyConfig,
    round: u64,
) -> Result<Option<ClusterOutcome>> {
    let n = host.n();
    let (blue_x, red_y) = disjoint_sides(n, blue, red, cap);
    if blue_x.len() < 2 {
        return Ok(None);
    }
    let x = blue_x.vertex_set(n);
    let y = red_y.vertex_set(n);
    let pcfg = ProcessConfig {
        eta: cfg.eta,
        seed: derive_seed(&[cfg.seed, round]),
        probe_order: cfg.probe_order,
    };
    cluster_process(host, pattern, &x, &y, &blue_x, &red_y, &pcfg).map(Some)
}

/// Picks blue and red copies alternately so that the chosen blue copies are
/// disjoint from the chosen red ones, stopping at `cap` per side.
fn disjoint_sides(n: usize, blue: &[EmbeddedCopy], red: &[EmbeddedCopy], cap: usize) -> (Tiling, Tiling) {
    let mut used = VertexSet::new(n);
    let mut bx = Tiling::new(Colour::Blue);
    let mut ry = Tiling::new(Colour::Red);
    let mut bi = blue.iter();
    let mut ri = red.iter();
    let fits = |c: &EmbeddedCopy, used: &VertexSet| c.vertex_map.iter().all(|&v| !used.contains(v));
    'outer: while bx.len() < cap {
        let Some(b) = bi.by_ref().find(|c| fits(c, &used)) else {
            break;
        };
        let bset = b.vertex_set(n);
        used.union_with(&bset);
        loop {
            match ri.next() {
                Some(r) if fits(r, &used) => {
                    used.union_with(&r.vertex_set(n));
                    bx.copies.push(b.clone());
                    ry.copies.push(r.clone());
                    break;
                }
                Some(_) => continue,
                None => {
                    used.difference_with(&bset);
                    break 'outer;
                }
            }
        }
    }
    (bx, ry)
}
