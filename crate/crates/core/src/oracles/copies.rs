use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};
use crate::pattern::Density;
use crate::search::work_estimate;

use super::MASK_CEILING;

/// One copy of `H` in a host, as a subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveCopy {
    pub vertex_map: Vec<usize>,
    pub vertex_mask: u64,
    /// Host edge indices (lexicographic order) used by the copy, sorted.
    pub edges: Vec<usize>,
    pub edge_mask: u64,
}

impl NaiveCopy {
    /// Colour of the copy under a colouring given as a red-edge mask.
    pub fn colour_under(&self, red_mask: u64) -> Option<Colour> {
        // An edgeless copy reads as red.
        if self.edge_mask & !red_mask == 0 {
            Some(Colour::Red)
        } else if self.edge_mask & red_mask == 0 {
            Some(Colour::Blue)
        } else {
            None
        }
    }

    pub fn hits(&self, mask: u64) -> usize {
        (self.vertex_mask & mask).count_ones() as usize
    }
}

/// All copies of `H` in an uncoloured host, found by trying every injective
/// map and deduplicating on (vertex set, edge set).
#[derive(Clone, Debug)]
pub struct CopyTable {
    pub n: usize,
    pub host_edges: Vec<(usize, usize)>,
    pub copies: Vec<NaiveCopy>,
}

impl CopyTable {
    pub fn build(host: &Graph, pattern: &Graph, budget: u128) -> Result<Self> {
        let n = host.n();
        if n > MASK_CEILING {
            return Err(Error::TooLarge(n, MASK_CEILING));
        }
        let k = pattern.n();
        let estimate = work_estimate(n, k);
        if estimate > budget {
            return Err(Error::BudgetExceeded {
                what: "naive copy enumeration",
                estimate,
                budget,
            });
        }
        let host_edges: Vec<(usize, usize)> = host.edges().collect();
        let mut index = vec![usize::MAX; n * n];
        for (i, &(u, v)) in host_edges.iter().enumerate() {
            index[u * n + v] = i;
            index[v * n + u] = i;
        }
        let pattern_edges: Vec<(usize, usize)> = pattern.edges().collect();
        let mut seen = BTreeSet::new();
        let mut copies = Vec::new();
        let mut map = Vec::with_capacity(k);
        let mut used = vec![false; n];
        injective_maps(n, k, &mut map, &mut used, &mut |map| {
            let mut edges = Vec::with_capacity(pattern_edges.len());
            for &(a, b) in &pattern_edges {
                let e = index[map[a] * n + map[b]];
                if e == usize::MAX {
                    return;
                }
                edges.push(e);
            }
            edges.sort_unstable();
            let vertex_mask = map.iter().fold(0u64, |m, &v| m | (1 << v));
            if seen.insert((vertex_mask, edges.clone())) {
                let edge_mask = edges.iter().fold(0u64, |m, &e| if e < 64 { m | (1 << e) } else { m });
                copies.push(NaiveCopy {
                    vertex_map: map.to_vec(),
                    vertex_mask,
                    edges,
                    edge_mask,
                });
            }
        });
        Ok(Self { n, host_edges, copies })
    }

    pub fn edge_count(&self) -> usize {
        self.host_edges.len()
    }

    /// Red-edge mask of a coloured host sharing this table's edge list.
    pub fn red_mask(&self, host: &crate::ColouredGraph) -> Result<u64> {
        if self.edge_count() > 64 {
            return Err(Error::TooLarge(self.edge_count(), 64));
        }
        Ok(self
            .host_edges
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &(u, v))| match host.colour(u, v) {
                Some(Colour::Red) => m | (1 << i),
                _ => m,
            }))
    }
}

fn injective_maps(n: usize, k: usize, map: &mut Vec<usize>, used: &mut [bool], visit: &mut impl FnMut(&[usize])) {
    if map.len() == k {
        visit(map);
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            map.push(v);
            injective_maps(n, k, map, used, visit);
            map.pop();
            used[v] = false;
        }
    }
}

/// `m₂` by enumerating every vertex subset `S` with `|S| ≥ 3` and every edge
/// subset inside it.
pub fn naive_m2_density(h: &Graph) -> Density {
    if h.edge_count() < 2 {
        return Density::new(1, 2);
    }
    let k = h.n();
    assert!(k <= 8, "naive m2 oracle is exponential in e(H)");
    let edges: Vec<(usize, usize)> = h.edges().collect();
    let mut best: Option<Density> = None;
    for s in 0u32..(1 << k) {
        let v = s.count_ones() as i64;
        if v < 3 {
            continue;
        }
        let inside: Vec<usize> = (0..edges.len())
            .filter(|&i| (s >> edges[i].0) & 1 == 1 && (s >> edges[i].1) & 1 == 1)
            .collect();
        for sub in 0u64..(1 << inside.len()) {
            let e = sub.count_ones() as i64;
            let r = Density::new(e - 1, v - 2);
            if best.is_none_or(|b| r > b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or(Density::new(1, 2))
}
