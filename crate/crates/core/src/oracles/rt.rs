use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour, Graph};
use crate::pattern::PatternStats;
use crate::sample::{derive_seed, rng_from_seed};

use super::copies::CopyTable;

/// Most colourings sampled for an upper bound when exhaustion is refused.
const SAMPLE_CAP: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RtValue {
    Exact(usize),
    /// `lower ≤ Rt ≤ upper`; the upper bound is the best colouring found.
    Bracket { lower: usize, upper: usize },
}

impl RtValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            RtValue::Exact(v) => Some(v),
            RtValue::Bracket { .. } => None,
        }
    }
}

/// Size of a maximum monochromatic `H`-tiling of the given colour.
pub fn max_tiling_size(host: &ColouredGraph, pattern: &PatternStats, colour: Colour, budget: u128) -> Result<usize> {
    let table = CopyTable::build(host.graph(), pattern.graph(), budget)?;
    let red = table.red_mask(host)?;
    let packer = Packer::new(&table, pattern.k());
    Ok(packer.best(red, colour, usize::MAX))
}

/// `Rt(H, G)`: the minimum over all red/blue colourings of `G` of the largest
/// monochromatic `H`-tiling.
///
/// Colourings related by swapping the colours are visited once. On complete
/// hosts the enumeration is further restricted to colourings where vertex 0
/// attains the largest monochromatic degree `d`, in red, with red neighbours
/// `1..=d`; every colouring of `K_n` is isomorphic, up to a colour swap, to one
/// of these. `budget` caps the number of colourings; beyond it a seeded sample
/// gives an upper bound.
pub fn exact_rt(pattern: &PatternStats, host: &Graph, budget: u128) -> Result<RtValue> {
    let table = CopyTable::build(host, pattern.graph(), budget.max(1 << 20))?;
    let m = table.edge_count();
    if m > 64 {
        return Err(Error::TooLarge(m, 64));
    }
    let packer = Packer::new(&table, pattern.k());
    let n = host.n();
    let complete = n >= 2 && m == n * (n - 1) / 2;
    let families = if complete { star_families(n) } else { vec![first_edge_family(m)] };
    let total: u128 = families.iter().map(|f| 1u128 << f.free_bits).sum();

    if total > budget {
        let samples = budget.min(SAMPLE_CAP) as u64;
        let mut rng = rng_from_seed(derive_seed(&[m as u64, pattern.k() as u64]));
        let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut upper = usize::MAX;
        for _ in 0..samples.max(1) {
            let mask = rand::RngCore::next_u64(&mut rng) & full;
            upper = upper.min(packer.best_either(mask, upper));
        }
        return Ok(RtValue::Bracket { lower: 0, upper });
    }

    let best = AtomicUsize::new(usize::MAX);
    for fam in &families {
        let count = 1u64 << fam.free_bits;
        let chunk = 1u64 << fam.free_bits.min(10);
        (0..count.div_ceil(chunk)).into_par_iter().for_each(|c| {
            for free in c * chunk..((c + 1) * chunk).min(count) {
                let mask = fam.fixed | (free << fam.shift);
                if !fam.admits(mask, &table) {
                    continue;
                }
                let cur = best.load(Ordering::Relaxed);
                let got = packer.best_either(mask, cur);
                if got < cur {
                    best.fetch_min(got, Ordering::Relaxed);
                }
            }
        });
    }
    let v = best.into_inner();
    // No admissible colouring at all only happens when there are no edges.
    Ok(RtValue::Exact(if v == usize::MAX { packer.best_either(0, usize::MAX) } else { v }))
}

struct Family {
    fixed: u64,
    shift: u32,
    free_bits: u32,
    /// Cap on every monochromatic degree, for the complete-host filter.
    max_degree: Option<usize>,
}

impl Family {
    fn admits(&self, red_mask: u64, table: &CopyTable) -> bool {
        let Some(d) = self.max_degree else {
            return true;
        };
        let mut red = vec![0usize; table.n];
        let mut blue = vec![0usize; table.n];
        for (i, &(u, v)) in table.host_edges.iter().enumerate() {
            let deg = if red_mask >> i & 1 == 1 { &mut red } else { &mut blue };
            deg[u] += 1;
            deg[v] += 1;
        }
        red.iter().chain(&blue).all(|&x| x <= d)
    }
}

fn first_edge_family(m: usize) -> Family {
    if m == 0 {
        return Family {
            fixed: 0,
            shift: 0,
            free_bits: 0,
            max_degree: None,
        };
    }
    Family {
        fixed: 1,
        shift: 1,
        free_bits: m as u32 - 1,
        max_degree: None,
    }
}

/// Edges `0–1, …, 0–(n−1)` come first in lexicographic order.
fn star_families(n: usize) -> Vec<Family> {
    let star = n - 1;
    let rest = (star * (star - 1) / 2) as u32;
    (star.div_ceil(2)..=star)
        .map(|d| Family {
            fixed: (1u64 << d) - 1,
            shift: star as u32,
            free_bits: rest,
            max_degree: Some(d),
        })
        .collect()
}

/// Maximum disjoint packing of copies by branch and bound over vertex masks.
struct Packer<'t> {
    table: &'t CopyTable,
    k: usize,
    /// Copy indices bucketed by lowest vertex.
    by_low: Vec<Vec<usize>>,
}

impl<'t> Packer<'t> {
    fn new(table: &'t CopyTable, k: usize) -> Self {
        let mut by_low = vec![Vec::new(); table.n.max(1)];
        for (i, c) in table.copies.iter().enumerate() {
            by_low[c.vertex_mask.trailing_zeros() as usize].push(i);
        }
        Self { table, k, by_low }
    }

    /// Larger of the two colours' maximum tilings, or any value `≥ cutoff`
    /// once that is certain.
    fn best_either(&self, red_mask: u64, cutoff: usize) -> usize {
        let r = self.best(red_mask, Colour::Red, cutoff);
        if r >= cutoff {
            return r;
        }
        r.max(self.best(red_mask, Colour::Blue, cutoff))
    }

    fn best(&self, red_mask: u64, colour: Colour, cutoff: usize) -> usize {
        let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); self.by_low.len()];
        let mut any = 0u64;
        for (v, ids) in self.by_low.iter().enumerate() {
            for &i in ids {
                let c = &self.table.copies[i];
                let ok = c.edges.is_empty() || c.colour_under(red_mask) == Some(colour);
                if ok {
                    buckets[v].push(c.vertex_mask);
                    any |= c.vertex_mask;
                }
            }
            buckets[v].sort_unstable();
            buckets[v].dedup();
        }
        let mut best = 0;
        self.pack(&buckets, any, 0, &mut best, cutoff);
        best
    }

    fn pack(&self, buckets: &[Vec<u64>], free: u64, cur: usize, best: &mut usize, cutoff: usize) {
        if cur > *best {
            *best = cur;
        }
        if *best >= cutoff || cur + (free.count_ones() as usize) / self.k.max(1) <= *best || free == 0 {
            return;
        }
        let v = free.trailing_zeros() as usize;
        for &c in &buckets[v] {
            if c & !free == 0 {
                self.pack(buckets, free & !c, cur + 1, best, cutoff);
            }
        }
        self.pack(buckets, free & !(1 << v), cur, best, cutoff);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(h: &str, n: usize) -> usize {
        exact_rt(&PatternStats::parse(h).unwrap(), &Graph::complete(n), u128::MAX)
            .unwrap()
            .exact()
            .unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(rt("k2", 3), 1);
        assert_eq!(rt("k3", 5), 0);
        assert_eq!(rt("k3", 6), 1);
        assert_eq!(rt("k2", 4), 1);
    }

    #[test]
    fn star_filter_agrees_with_plain_enumeration() {
        let k3 = PatternStats::clique(3);
        for n in 3..=6 {
            let g = Graph::complete(n);
            let table = CopyTable::build(&g, k3.graph(), u128::MAX).unwrap();
            let packer = Packer::new(&table, 3);
            let m = table.edge_count();
            let plain = (0u64..1 << m).map(|mask| packer.best_either(mask, usize::MAX)).min().unwrap();
            assert_eq!(rt("k3", n), plain, "n = {n}");
        }
    }

    #[test]
    fn bracket_when_budget_is_small() {
        let k3 = PatternStats::clique(3);
        let v = exact_rt(&k3, &Graph::complete(7), 10).unwrap();
        match v {
            RtValue::Bracket { lower, upper } => assert!(lower <= upper),
            RtValue::Exact(_) => panic!("expected a bracket"),
        }
    }

    #[test]
    fn max_tiling_of_red_k7() {
        let g = ColouredGraph::monochromatic(Graph::complete(7), Colour::Red);
        let k3 = PatternStats::clique(3);
        assert_eq!(max_tiling_size(&g, &k3, Colour::Red, u128::MAX).unwrap(), 2);
        assert_eq!(max_tiling_size(&g, &k3, Colour::Blue, u128::MAX).unwrap(), 0);
    }
}
