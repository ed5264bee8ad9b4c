use std::collections::HashMap;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};
use crate::pattern::{Density, PatternStats};
use crate::vertex_set::VertexSet;

use super::copies::CopyTable;
use super::mask_of;

/// The `e(H)`-uniform hypergraph on (edge of `K_n`, colour) pairs whose
/// hyperedges are the coloured edge sets of `(A, B)`-good copies.
///
/// Vertex `2·i + c` is edge `i` of `K_n` (lexicographic) in colour `c`
/// (0 red, 1 blue).
#[derive(Clone, Debug)]
pub struct AuxHypergraph {
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edges_of_kn: Vec<(usize, usize)>,
    /// Sorted vertex lists, each of length `e(H)`, without repeats.
    pub hyperedges: Vec<Vec<u32>>,
    pub uniformity: usize,
    /// `n^{−1/max{m₂, 1}}`.
    pub tau: f64,
}

impl AuxHypergraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.edges_of_kn.len()
    }

    pub fn vertex(edge: usize, colour: Colour) -> u32 {
        (2 * edge + colour.index()) as u32
    }

    /// Number of hyperedges containing every vertex of `u`.
    pub fn degree(&self, u: &[u32]) -> usize {
        self.hyperedges
            .iter()
            .filter(|h| u.iter().all(|x| h.binary_search(x).is_ok()))
            .count()
    }

    /// Host edges touched by `w`, in either colour.
    pub fn shadow(&self, w: &[u32]) -> Result<Graph> {
        let mut edges: Vec<(usize, usize)> = w.iter().map(|&x| self.edges_of_kn[x as usize / 2]).collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::from_edges(self.n, edges)
    }

    pub fn edge_count_bound(&self, pattern: &PatternStats) -> u128 {
        (1u128 << pattern.ell()) * (self.n as u128).pow(pattern.k() as u32)
    }
}

/// Builds the hypergraph by enumerating every copy of `H` in `K_n`: a copy
/// with `≥ α` vertices in `A` yields its all-red edge set, one with `≥ α` in
/// `B` its all-blue edge set.
pub fn build_aux_hypergraph(
    n: usize,
    a: &VertexSet,
    b: &VertexSet,
    pattern: &PatternStats,
    budget: u128,
) -> Result<AuxHypergraph> {
    if a.universe() != n || b.universe() != n || !a.is_disjoint(b) || a.union(b).len() != n {
        return Err(Error::InvalidArgument("A and B must partition 0..n".into()));
    }
    if pattern.ell() == 0 {
        return Err(Error::InvalidArgument("the pattern needs at least one edge".into()));
    }
    let table = CopyTable::build(&Graph::complete(n), pattern.graph(), budget)?;
    let (am, bm) = (mask_of(a), mask_of(b));
    let mut hyperedges = Vec::new();
    for copy in &table.copies {
        for (colour, side) in [(Colour::Red, am), (Colour::Blue, bm)] {
            if copy.hits(side) >= pattern.alpha() {
                hyperedges.push(copy.edges.iter().map(|&e| AuxHypergraph::vertex(e, colour)).collect());
            }
        }
    }
    hyperedges.sort_unstable();
    hyperedges.dedup();
    let m = pattern.m2().max(Density::one());
    let tau = (n as f64).powf(-m.recip().to_f64().expect("finite"));
    Ok(AuxHypergraph {
        n,
        a: a.to_vec(),
        b: b.to_vec(),
        edges_of_kn: table.host_edges,
        hyperedges,
        uniformity: pattern.ell(),
        tau,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub j: usize,
    /// Maximum number of hyperedges through a `j`-set of vertices.
    pub max_degree: usize,
    /// `e(H)! · τ^{j−1} · n^{k−2}`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxDegreeReport {
    pub n: usize,
    pub pattern: String,
    pub hyperedges: usize,
    pub edge_count_bound: u128,
    pub uniform: bool,
    /// No hyperedge uses both colours of one edge.
    pub colour_consistent: bool,
    pub rows: Vec<DegreeRow>,
    /// `max d(v) ≤ e(H) · n^{k−2}`.
    pub refined_single_bound: u64,
    pub refined_single_pass: bool,
}

impl AuxDegreeReport {
    pub fn all_pass(&self) -> bool {
        self.uniform
            && self.colour_consistent
            && self.hyperedges as u128 <= self.edge_count_bound
            && self.refined_single_pass
            && self.rows.iter().all(|r| r.pass)
    }
}

/// `Δ_j` for every `j ∈ [e(H)]` against the degree bounds.
pub fn aux_degree_check(aux: &AuxHypergraph, pattern: &PatternStats) -> AuxDegreeReport {
    let ell = pattern.ell();
    let k = pattern.k() as i32;
    let n = aux.n as f64;
    let factorial: f64 = (1..=ell).map(|i| i as f64).product();
    let uniform = aux.hyperedges.iter().all(|h| h.len() == ell);
    let colour_consistent = aux
        .hyperedges
        .iter()
        .all(|h| h.windows(2).all(|w| w[0] / 2 != w[1] / 2));

    let mut rows = Vec::with_capacity(ell);
    for j in 1..=ell {
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut subset = Vec::with_capacity(j);
        for h in &aux.hyperedges {
            for_each_subset(h, j, 0, &mut subset, &mut |s| *counts.entry(s.to_vec()).or_default() += 1);
        }
        let max_degree = counts.values().copied().max().unwrap_or(0);
        // One power call keeps the integer cases (τ = 1/n) exact enough.
        let exponent = (k - 2) as f64 + (j as f64 - 1.0) * aux.tau.ln() / n.ln();
        let bound = factorial * n.powf(exponent);
        rows.push(DegreeRow {
            j,
            max_degree,
            bound,
            pass: max_degree as f64 <= bound * (1.0 + 1e-12),
        });
    }
    let refined_single_bound = ell as u64 * (aux.n as u64).pow((k - 2).max(0) as u32);
    let refined_single_pass = rows.first().is_none_or(|r| r.max_degree as u64 <= refined_single_bound);
    AuxDegreeReport {
        n: aux.n,
        pattern: pattern.name().to_string(),
        hyperedges: aux.hyperedges.len(),
        edge_count_bound: aux.edge_count_bound(pattern),
        uniform,
        colour_consistent,
        rows,
        refined_single_bound,
        refined_single_pass,
    }
}

fn for_each_subset(items: &[u32], j: usize, start: usize, cur: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if cur.len() == j {
        visit(cur);
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        for_each_subset(items, j, i + 1, cur, visit);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halves(n: usize) -> (VertexSet, VertexSet) {
        (
            VertexSet::from_vertices(n, 0..n / 2),
            VertexSet::from_vertices(n, n / 2..n),
        )
    }

    #[test]
    fn four_vertices_give_eight_hyperedges() {
        let k3 = PatternStats::clique(3);
        let (a, b) = halves(4);
        let aux = build_aux_hypergraph(4, &a, &b, &k3, u128::MAX).unwrap();
        assert_eq!(aux.hyperedges.len(), 8);
        assert!(aux.hyperedges.iter().all(|h| h.len() == 3));
    }

    #[test]
    fn bounds_hold_for_triangles() {
        let k3 = PatternStats::clique(3);
        for n in [6, 8, 10] {
            let (a, b) = halves(n);
            let aux = build_aux_hypergraph(n, &a, &b, &k3, u128::MAX).unwrap();
            let report = aux_degree_check(&aux, &k3);
            assert!(report.all_pass(), "{report:?}");
            assert!(report.hyperedges as u128 <= 8 * (n as u128).pow(3));
        }
    }

    #[test]
    fn mixed_pairs_have_degree_zero() {
        let k3 = PatternStats::clique(3);
        let (a, b) = halves(6);
        let aux = build_aux_hypergraph(6, &a, &b, &k3, u128::MAX).unwrap();
        for e in 0..aux.edges_of_kn.len() {
            let u = [AuxHypergraph::vertex(e, Colour::Red), AuxHypergraph::vertex(e, Colour::Blue)];
            assert_eq!(aux.degree(&u), 0);
        }
        assert_eq!(aux.degree(&[AuxHypergraph::vertex(0, Colour::Red)]), 4);
    }

    #[test]
    fn shadow_projects_edges() {
        let k3 = PatternStats::clique(3);
        let (a, b) = halves(4);
        let aux = build_aux_hypergraph(4, &a, &b, &k3, u128::MAX).unwrap();
        let w = [AuxHypergraph::vertex(0, Colour::Red), AuxHypergraph::vertex(0, Colour::Blue), AuxHypergraph::vertex(5, Colour::Red)];
        let g = aux.shadow(&w).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(2, 3));
    }
}
