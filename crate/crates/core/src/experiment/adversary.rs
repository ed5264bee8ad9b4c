use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour, Graph};
use crate::pattern::PatternStats;
use crate::sample::{rng_from_seed, shuffle, Rng};
use crate::search::{Matcher, SearchOpts};
use crate::vertex_set::VertexSet;

/// Copies counted per colour before the copy avoider stops counting.
const AVOIDER_COUNT_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Adversary {
    /// Each edge red with probability 1/2.
    UniformRandom,
    /// Red inside the part, blue everywhere else. Without an explicit part a
    /// seeded `fraction` of the vertices is chosen.
    PlantedPartition { part: Option<Vec<usize>>, fraction: f64 },
    /// Edges in seeded order, each given the colour closing fewer
    /// monochromatic copies of `H` through it.
    CopyAvoiderGreedy,
    /// Vertices split at the median degree (ties in seeded order); edges
    /// within a half red, across blue.
    MajorityDegree,
}

impl Adversary {
    pub const NAMES: [&'static str; 4] = ["uniform-random", "planted-partition", "copy-avoider-greedy", "majority-degree"];

    pub fn all() -> Vec<Adversary> {
        Self::NAMES.iter().map(|n| n.parse().expect("known name")).collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Adversary::UniformRandom => Self::NAMES[0],
            Adversary::PlantedPartition { .. } => Self::NAMES[1],
            Adversary::CopyAvoiderGreedy => Self::NAMES[2],
            Adversary::MajorityDegree => Self::NAMES[3],
        }
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Adversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" => Ok(Adversary::UniformRandom),
            "planted-partition" => Ok(Adversary::PlantedPartition {
                part: None,
                fraction: 0.2,
            }),
            "copy-avoider-greedy" => Ok(Adversary::CopyAvoiderGreedy),
            "majority-degree" => Ok(Adversary::MajorityDegree),
            _ => Err(Error::InvalidArgument(format!(
                "unknown adversary `{s}` (expected one of {})",
                Adversary::NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub adversary: Adversary,
    pub seed: u64,
}

impl AdversarySpec {
    pub fn new(adversary: Adversary, seed: u64) -> Self {
        Self { adversary, seed }
    }
}

/// Colours every edge of `g`. `pattern` is only consulted by the copy avoider.
pub fn colour_with(g: &Graph, spec: &AdversarySpec, pattern: &PatternStats) -> Result<ColouredGraph> {
    let n = g.n();
    let mut rng = rng_from_seed(spec.seed);
    match &spec.adversary {
        Adversary::UniformRandom => Ok(uniform(g, &mut rng)),
        Adversary::PlantedPartition { part, fraction } => {
            let part = match part {
                Some(p) => {
                    if let Some(&v) = p.iter().find(|&&v| v >= n) {
                        return Err(Error::InvalidArgument(format!("part vertex {v} is out of range")));
                    }
                    VertexSet::from_vertices(n, p.iter().copied())
                }
                None => {
                    if !(0.0..=1.0).contains(fraction) {
                        return Err(Error::InvalidArgument(format!("fraction must lie in [0, 1], got {fraction}")));
                    }
                    let mut order: Vec<usize> = (0..n).collect();
                    shuffle(&mut order, &mut rng);
                    let size = (fraction * n as f64).round() as usize;
                    VertexSet::from_vertices(n, order[..size.min(n)].iter().copied())
                }
            };
            Ok(ColouredGraph::from_fn(g.clone(), |u, v| {
                if part.contains(u) && part.contains(v) {
                    Colour::Red
                } else {
                    Colour::Blue
                }
            }))
        }
        Adversary::CopyAvoiderGreedy => Ok(copy_avoider(g, pattern, &mut rng)),
        Adversary::MajorityDegree => {
            let mut order: Vec<usize> = (0..n).collect();
            shuffle(&mut order, &mut rng);
            order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
            let high = VertexSet::from_vertices(n, order[..n.div_ceil(2)].iter().copied());
            Ok(ColouredGraph::from_fn(g.clone(), |u, v| {
                if high.contains(u) == high.contains(v) {
                    Colour::Red
                } else {
                    Colour::Blue
                }
            }))
        }
    }
}

/// Uniformly random colouring: one draw per edge in lexicographic order.
pub fn colour_uniform(g: &Graph, seed: u64) -> ColouredGraph {
    uniform(g, &mut rng_from_seed(seed))
}

fn uniform(g: &Graph, rng: &mut Rng) -> ColouredGraph {
    ColouredGraph::from_fn(g.clone(), |_, _| if rng.next_u64() >> 63 == 0 { Colour::Red } else { Colour::Blue })
}

fn copy_avoider(g: &Graph, pattern: &PatternStats, rng: &mut Rng) -> ColouredGraph {
    let n = g.n();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    shuffle(&mut edges, rng);
    let mut adj = [vec![VertexSet::new(n); n], vec![VertexSet::new(n); n]];
    let all = VertexSet::full(n);
    let h_edges: Vec<(usize, usize)> = pattern.graph().edges().collect();
    let mut chosen = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        let mut closed = [0u64; 2];
        for (ci, colour_adj) in adj.iter_mut().enumerate() {
            colour_adj[u].insert(v);
            colour_adj[v].insert(u);
            let matcher = Matcher::new(pattern.graph(), colour_adj);
            'count: for &(a, b) in &h_edges {
                for pins in [[(a, u), (b, v)], [(a, v), (b, u)]] {
                    let _ = matcher.for_each(&SearchOpts::within(&all).pinned(&pins), |_| {
                        closed[ci] += 1;
                        if closed[ci] >= AVOIDER_COUNT_CAP {
                            ControlFlow::Break(())
                        } else {
                            ControlFlow::Continue(())
                        }
                    });
                    if closed[ci] >= AVOIDER_COUNT_CAP {
                        break 'count;
                    }
                }
            }
            colour_adj[u].remove(v);
            colour_adj[v].remove(u);
        }
        let colour = match closed[0].cmp(&closed[1]) {
            std::cmp::Ordering::Less => Colour::Red,
            std::cmp::Ordering::Greater => Colour::Blue,
            std::cmp::Ordering::Equal => {
                if rng.next_u64() & 1 == 0 {
                    Colour::Red
                } else {
                    Colour::Blue
                }
            }
        };
        let ci = colour.index();
        adj[ci][u].insert(v);
        adj[ci][v].insert(u);
        chosen.push((u, v, colour));
    }
    ColouredGraph::from_coloured_edges(n, chosen).expect("edges come from a valid graph")
}
