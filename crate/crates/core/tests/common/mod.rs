#![allow(dead_code)]

use std::collections::BTreeSet;

use rtile::sample::{rng_from_seed, shuffle};
use rtile::tiling::Tiling;
use rtile::{ColouredGraph, Colour, Graph, PatternStats, VertexSet};

/// Pairs `(i, j)`, `i < j`, in lexicographic order: bit positions of a graph mask.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let edges = pairs(n).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e);
    Graph::from_edges(n, edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative mask per isomorphism class of graphs on `n` vertices,
/// by minimising the edge mask over all relabellings.
pub fn isomorphism_classes(n: usize) -> Vec<u64> {
    let ps = pairs(n);
    let mut index = vec![0usize; n * n];
    for (i, &(u, v)) in ps.iter().enumerate() {
        index[u * n + v] = i;
        index[v * n + u] = i;
    }
    let perms = permutations(n);
    // Image of each edge bit under each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| ps.iter().map(|&(u, v)| index[p[u] * n + p[v]]).collect())
        .collect();
    let mut classes = BTreeSet::new();
    for mask in 0u64..(1 << ps.len()) {
        let canon = images
            .iter()
            .map(|img| {
                img.iter()
                    .enumerate()
                    .fold(0u64, |m, (i, &j)| if mask >> i & 1 == 1 { m | 1 << j } else { m })
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes.into_iter().collect()
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in g.neighbours(v).iter() {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Independent tiling check straight from the coloured edge data.
pub fn tiling_is_valid(host: &ColouredGraph, pattern: &PatternStats, tiling: &Tiling) -> Result<(), String> {
    let mut used = vec![false; host.n()];
    for (i, copy) in tiling.copies.iter().enumerate() {
        let map = &copy.vertex_map;
        if map.len() != pattern.k() {
            return Err(format!("copy {i} has {} vertices", map.len()));
        }
        for &v in map {
            if v >= host.n() || used[v] {
                return Err(format!("copy {i} reuses or leaves the host at {v}"));
            }
            used[v] = true;
        }
        for (a, b) in pattern.graph().edges() {
            match host.colour(map[a], map[b]) {
                Some(c) if c == tiling.colour => {}
                Some(_) => return Err(format!("copy {i} edge {a}-{b} has the wrong colour")),
                None => return Err(format!("copy {i} edge {a}-{b} is missing")),
            }
        }
    }
    Ok(())
}

/// Cross-edge rule for planted instances; arguments are positions within `X`
/// and `Y` (0-based).
#[derive(Clone, Copy, Debug)]
pub enum Cross {
    /// Independent fair coin per cross edge.
    Random,
    /// Colour decided by a random red/blue label on the `X` end.
    XLabel,
    /// Colour decided by a random label on the `Y` end (red label ⇒ red edge).
    YLabel,
}

pub struct Planted {
    pub host: ColouredGraph,
    pub x: VertexSet,
    pub y: VertexSet,
    pub blue_x: Tiling,
    pub red_y: Tiling,
}

/// `K_{2s}` with a blue clique on `X`, a red clique on `Y`, cross edges by
/// `cross`, then all vertices relabelled at random.
pub fn planted(s: usize, cross: Cross, seed: u64) -> Planted {
    use rand::RngCore;
    let n = 2 * s;
    let mut rng = rng_from_seed(seed);
    let mut relabel: Vec<usize> = (0..n).collect();
    shuffle(&mut relabel, &mut rng);
    let x_label: Vec<bool> = (0..s).map(|_| rng.next_u64() & 1 == 0).collect();
    let y_label: Vec<bool> = (0..s).map(|_| rng.next_u64() & 1 == 0).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let colour = match (u < s, v < s) {
                (true, true) => Colour::Blue,
                (false, false) => Colour::Red,
                _ => {
                    let red = match cross {
                        Cross::Random => rng.next_u64() & 1 == 0,
                        Cross::XLabel => x_label[u],
                        Cross::YLabel => y_label[v - s],
                    };
                    if red {
                        Colour::Red
                    } else {
                        Colour::Blue
                    }
                }
            };
            edges.push((relabel[u], relabel[v], colour));
        }
    }
    let host = ColouredGraph::from_coloured_edges(n, edges).unwrap();
    let side = |range: std::ops::Range<usize>, colour: Colour| Tiling {
        colour,
        copies: range
            .collect::<Vec<_>>()
            .chunks(3)
            .map(|c| rtile::EmbeddedCopy {
                vertex_map: c.iter().map(|&v| relabel[v]).collect(),
                colour: Some(colour),
            })
            .collect(),
    };
    let blue_x = side(0..s, Colour::Blue);
    let red_y = side(s..n, Colour::Red);
    Planted {
        x: blue_x.vertex_set(n),
        y: red_y.vertex_set(n),
        host,
        blue_x,
        red_y,
    }
}
