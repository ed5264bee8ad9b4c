//! Pattern graphs `H` and the statistics every other module keys off:
//! order `k`, independence number `α`, edge count and the `m₂`-density.

use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::search::{Matcher, SearchOpts};
use crate::vertex_set::VertexSet;

/// Exact rational used for `m₂`.
pub type Density = Ratio<i64>;

/// Largest pattern for which `m₂` is computed by subset enumeration.
pub const M2_VERTEX_CEILING: usize = 24;

/// Default ceiling for exact independence number search.
pub const DEFAULT_ALPHA_CEILING: usize = 20;

/// `m₂(H) = max{(e(F) − 1)/(v(F) − 2) : F ⊆ H, v(F) ≥ 3}`, or `1/2` when `H`
/// has fewer than two edges.
///
/// Only induced subgraphs need to be considered: adding edges to `F` on a
/// fixed vertex set never lowers the ratio.
pub fn m2_density(h: &Graph) -> Result<Density> {
    let k = h.n();
    if k > M2_VERTEX_CEILING {
        return Err(Error::TooLarge(k, M2_VERTEX_CEILING));
    }
    let half = Density::new(1, 2);
    if h.edge_count() < 2 {
        return Ok(half);
    }
    let adj = small_adjacency(h);
    let mut best: Option<Density> = None;
    for subset in 0u32..(1u32 << k) {
        let v = subset.count_ones() as i64;
        if v < 3 {
            continue;
        }
        let e = induced_edges(&adj, subset) as i64;
        let r = Density::new(e - 1, v - 2);
        if best.is_none_or(|b| r > b) {
            best = Some(r);
        }
    }
    Ok(best.unwrap_or(half))
}

fn small_adjacency(h: &Graph) -> Vec<u64> {
    (0..h.n())
        .map(|v| h.neighbours(v).iter().fold(0u64, |m, u| m | (1 << u)))
        .collect()
}

fn induced_edges(adj: &[u64], subset: u32) -> u32 {
    let mut twice = 0;
    let mut rest = subset;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        twice += (adj[v] & subset as u64).count_ones();
    }
    twice / 2
}

/// Size of a maximum independent set, by branch and bound over bitmasks.
pub fn independence_number(h: &Graph, ceiling: usize) -> Result<usize> {
    let k = h.n();
    let ceiling = ceiling.min(64);
    if k > ceiling {
        return Err(Error::TooLarge(k, ceiling));
    }
    let adj = small_adjacency(h);
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut best = 0;
    mis_branch(&adj, all, 0, &mut best);
    Ok(best)
}

fn mis_branch(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    if cand == 0 {
        *best = size;
        return;
    }
    // Vertices with no neighbour among the candidates always join.
    let mut forced = 0u64;
    let mut pivot = None;
    let mut pivot_deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & cand).count_ones();
        if d == 0 {
            forced |= 1 << v;
        } else if d > pivot_deg {
            pivot_deg = d;
            pivot = Some(v);
        }
    }
    if forced != 0 {
        mis_branch(adj, cand & !forced, size + forced.count_ones() as usize, best);
        return;
    }
    let v = pivot.expect("non-empty candidate set has a vertex");
    mis_branch(adj, cand & !(1 << v) & !adj[v], size + 1, best);
    mis_branch(adj, cand & !(1 << v), size, best);
}

/// A pattern graph with its cached invariants.
#[derive(Clone)]
pub struct PatternStats {
    name: String,
    pattern: Graph,
    alpha: usize,
    m2: Density,
    automorphisms: u64,
}

impl PatternStats {
    pub fn new(name: impl Into<String>, pattern: Graph) -> Result<Self> {
        if pattern.n() == 0 {
            return Err(Error::InvalidArgument("pattern needs at least one vertex".into()));
        }
        let alpha = independence_number(&pattern, DEFAULT_ALPHA_CEILING)?;
        let m2 = m2_density(&pattern)?;
        let automorphisms = count_automorphisms(&pattern);
        Ok(Self {
            name: name.into(),
            pattern,
            alpha,
            m2,
            automorphisms,
        })
    }

    /// Resolves `k<t>`, `p<t>`, `c<t>`, `matching-<t>` (alias `<t>k2`), or a path
    /// to a graph file in the text format.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Some(g) = named_pattern(spec) {
            return Self::new(spec.to_ascii_lowercase(), g?);
        }
        let path = Path::new(spec);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            return Self::new(spec, Graph::from_text(&text)?);
        }
        Err(Error::UnknownPattern(spec.to_string()))
    }

    pub fn clique(t: usize) -> Self {
        Self::new(format!("k{t}"), Graph::complete(t)).expect("cliques are valid patterns")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.pattern
    }

    /// `v(H)`.
    pub fn k(&self) -> usize {
        self.pattern.n()
    }

    /// `α(H)`.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// `e(H)`.
    pub fn ell(&self) -> usize {
        self.pattern.edge_count()
    }

    pub fn m2(&self) -> Density {
        self.m2
    }

    /// `|Aut(H)|`.
    pub fn automorphisms(&self) -> u64 {
        self.automorphisms
    }

    /// `2k − α`, the number of vertices one tie of a red and a blue copy needs.
    pub fn tie_order(&self) -> usize {
        2 * self.k() - self.alpha
    }

    /// `1 / max{m₂(H), 1}`, computed exactly and converted once.
    pub fn threshold_exponent(&self) -> f64 {
        let m = if self.m2 > Density::one() { self.m2 } else { Density::one() };
        m.recip().to_f64().expect("finite rational")
    }

    pub fn is_clique(&self) -> bool {
        let k = self.k();
        self.ell() == k * (k - 1) / 2
    }

    pub fn is_matching(&self) -> bool {
        self.ell() > 0 && (0..self.k()).all(|v| self.pattern.degree(v) <= 1)
    }
}

impl fmt::Debug for PatternStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternStats")
            .field("name", &self.name)
            .field("k", &self.k())
            .field("alpha", &self.alpha)
            .field("ell", &self.ell())
            .field("m2", &self.m2)
            .finish()
    }
}

fn count_automorphisms(h: &Graph) -> u64 {
    let matcher = Matcher::new(h, h.adjacency());
    let all = VertexSet::full(h.n());
    let mut count = 0u64;
    let _ = matcher.for_each(&SearchOpts::within(&all), |_| {
        count += 1;
        std::ops::ControlFlow::Continue(())
    });
    count
}

fn named_pattern(spec: &str) -> Option<Result<Graph>> {
    let s = spec.to_ascii_lowercase();
    let num = |rest: &str| rest.parse::<usize>().ok().filter(|&t| t >= 1);
    if let Some(t) = s.strip_prefix("matching-").and_then(num) {
        return Some(matching(t));
    }
    if let Some(t) = s.strip_suffix("k2").and_then(num) {
        return Some(matching(t));
    }
    if let Some(t) = s.strip_prefix('k').and_then(num) {
        return Some(Ok(Graph::complete(t)));
    }
    if let Some(t) = s.strip_prefix('p').and_then(num) {
        return Some(Graph::from_edges(t, (1..t).map(|i| (i - 1, i))));
    }
    if let Some(t) = s.strip_prefix('c').and_then(num) {
        if t < 3 {
            return Some(Err(Error::InvalidArgument(format!("cycle c{t} needs at least 3 vertices"))));
        }
        return Some(Graph::from_edges(t, (0..t).map(|i| (i, (i + 1) % t))));
    }
    None
}

fn matching(t: usize) -> Result<Graph> {
    Graph::from_edges(2 * t, (0..t).map(|i| (2 * i, 2 * i + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> PatternStats {
        PatternStats::parse(s).unwrap()
    }

    #[test]
    fn m2_fixed_points() {
        assert_eq!(pat("k2").m2(), Density::new(1, 2));
        assert_eq!(pat("k3").m2(), Density::new(2, 1));
        assert_eq!(pat("k4").m2(), Density::new(5, 2));
        assert_eq!(pat("p4").m2(), Density::new(1, 1));
        assert_eq!(pat("matching-2").m2(), Density::new(1, 2));
        assert_eq!(pat("2k2").m2(), Density::new(1, 2));
        assert_eq!(pat("c5").m2(), Density::new(4, 3));
        assert_eq!(pat("k1").m2(), Density::new(1, 2));
    }

    #[test]
    fn independence_fixed_points() {
        assert_eq!(pat("k3").alpha(), 1);
        assert_eq!(independence_number(&Graph::empty(4), 20).unwrap(), 4);
        assert_eq!(pat("p4").alpha(), 2);
        assert_eq!(pat("c5").alpha(), 2);
        assert_eq!(pat("matching-3").alpha(), 3);
    }

    #[test]
    fn independence_ceiling() {
        assert!(matches!(
            independence_number(&Graph::empty(21), 20),
            Err(Error::TooLarge(21, 20))
        ));
        assert_eq!(independence_number(&Graph::empty(21), 30).unwrap(), 21);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(pat("k3").automorphisms(), 6);
        assert_eq!(pat("k4").automorphisms(), 24);
        assert_eq!(pat("p4").automorphisms(), 2);
        assert_eq!(pat("c5").automorphisms(), 10);
        assert_eq!(pat("matching-2").automorphisms(), 8);
    }

    #[test]
    fn threshold_exponent_uses_max_with_one() {
        assert_eq!(pat("k3").threshold_exponent(), 0.5);
        assert_eq!(pat("k2").threshold_exponent(), 1.0);
        assert_eq!(pat("p4").threshold_exponent(), 1.0);
        assert!((pat("k4").threshold_exponent() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(PatternStats::parse("zz"), Err(Error::UnknownPattern(_))));
        assert!(PatternStats::parse("c2").is_err());
    }

    #[test]
    fn pattern_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tri.txt");
        std::fs::write(&path, "3 3\n0 1\n1 2\n0 2\n").unwrap();
        let p = PatternStats::parse(path.to_str().unwrap()).unwrap();
        assert_eq!(p.k(), 3);
        assert!(p.is_clique());
    }
}
