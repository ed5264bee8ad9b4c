//! Ordered backtracking search for (monochromatic) copies of a pattern.
//!
//! The matcher places pattern vertices in a fixed connectivity-first order.
//! Candidates for the next vertex are the intersection of the host
//! neighbourhoods of its already-placed pattern neighbours, minus used
//! vertices, filtered by degree inside the allowed set. An optional side
//! constraint ("at least `t` image vertices in `S`") is enforced as soon as it
//! becomes tight, and side vertices are tried first while hits are missing.
//! Results are deterministic for a fixed host and options.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour, Graph};
use crate::pattern::PatternStats;
use crate::vertex_set::VertexSet;

/// Default ceiling on the `n^k` work estimate for exhaustive counting.
pub const DEFAULT_COUNT_BUDGET: u128 = 1 << 40;

/// An injective image of `H` in a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddedCopy {
    /// `vertex_map[i]` is the host vertex playing pattern vertex `i`.
    pub vertex_map: Vec<usize>,
    /// The common colour of all mapped edges; `None` marks a non-monochromatic copy.
    pub colour: Option<Colour>,
}

impl EmbeddedCopy {
    /// Checks `map` against the raw host data and classifies its colour.
    /// Returns `None` when `map` is not an injective edge-preserving map.
    pub fn classify(host: &ColouredGraph, pattern: &Graph, map: &[usize]) -> Option<Self> {
        if map.len() != pattern.n() || map.iter().any(|&v| v >= host.n()) {
            return None;
        }
        for (i, &a) in map.iter().enumerate() {
            if map[i + 1..].contains(&a) {
                return None;
            }
        }
        let mut colour: Option<Option<Colour>> = None;
        for (a, b) in pattern.edges() {
            let c = host.colour(map[a], map[b])?;
            colour = match colour {
                None => Some(Some(c)),
                Some(Some(prev)) if prev == c => Some(Some(c)),
                _ => Some(None),
            };
        }
        Some(Self {
            vertex_map: map.to_vec(),
            // An edgeless pattern is monochromatic in every colour; report red.
            colour: colour.unwrap_or(Some(Colour::Red)),
        })
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_vertices(universe, self.vertex_map.iter().copied())
    }

    /// Image vertices in increasing order.
    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.vertex_map.clone();
        v.sort_unstable();
        v
    }

    pub fn hits(&self, side: &VertexSet) -> usize {
        self.vertex_map.iter().filter(|&&v| side.contains(v)).count()
    }
}

/// Restrictions for one search.
#[derive(Clone, Copy, Debug)]
pub struct SearchOpts<'s> {
    /// Only these host vertices may be used.
    pub allowed: &'s VertexSet,
    /// At least `.1` image vertices must lie in `.0`.
    pub side: Option<(&'s VertexSet, usize)>,
    /// Pre-assigned `(pattern vertex, host vertex)` pairs.
    pub pinned: &'s [(usize, usize)],
}

impl<'s> SearchOpts<'s> {
    pub fn within(allowed: &'s VertexSet) -> Self {
        Self {
            allowed,
            side: None,
            pinned: &[],
        }
    }

    pub fn hitting(mut self, side: &'s VertexSet, min_hits: usize) -> Self {
        self.side = Some((side, min_hits));
        self
    }

    pub fn pinned(mut self, pinned: &'s [(usize, usize)]) -> Self {
        self.pinned = pinned;
        self
    }
}

/// Backtracking matcher of one pattern against one host adjacency.
pub struct Matcher<'a> {
    pattern: &'a Graph,
    host: &'a [VertexSet],
}

struct Plan {
    order: Vec<usize>,
    /// Placed-earlier pattern neighbours of `order[i]`.
    back: Vec<Vec<usize>>,
}

struct State<'o, 's> {
    opts: &'o SearchOpts<'s>,
    plan: Plan,
    map: Vec<usize>,
    used: VertexSet,
    hits: usize,
    host_deg: Vec<usize>,
    buffers: Vec<Vec<usize>>,
}

impl<'a> Matcher<'a> {
    /// `host` is an adjacency list over `0..n` (typically one colour class).
    pub fn new(pattern: &'a Graph, host: &'a [VertexSet]) -> Self {
        Self { pattern, host }
    }

    fn plan(&self, pinned: &[(usize, usize)]) -> Plan {
        let k = self.pattern.n();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        for &(p, _) in pinned {
            if !placed[p] {
                placed[p] = true;
                order.push(p);
            }
        }
        while order.len() < k {
            // Most placed neighbours first, then highest degree, then lowest index.
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let linked = order.iter().filter(|&&u| self.pattern.has_edge(u, v)).count();
                    (linked, self.pattern.degree(v), std::cmp::Reverse(v))
                })
                .expect("an unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                order[..i]
                    .iter()
                    .copied()
                    .filter(|&u| self.pattern.has_edge(u, v))
                    .collect()
            })
            .collect();
        Plan { order, back }
    }

    /// Calls `visit` with `map` (pattern vertex → host vertex) for every
    /// embedding satisfying `opts`, until `visit` breaks.
    pub fn for_each<F>(&self, opts: &SearchOpts<'_>, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.n();
        let n = self.host.len();
        if k > n || opts.pinned.iter().any(|&(p, h)| p >= k || h >= n) {
            return ControlFlow::Continue(());
        }
        let host_deg = (0..n)
            .map(|v| {
                if opts.allowed.contains(v) {
                    self.host[v].intersection_len(opts.allowed)
                } else {
                    0
                }
            })
            .collect();
        let mut st = State {
            opts,
            plan: self.plan(opts.pinned),
            map: vec![usize::MAX; k],
            used: VertexSet::new(n),
            hits: 0,
            host_deg,
            buffers: vec![Vec::new(); k],
        };

        for &(p, h) in opts.pinned {
            if !opts.allowed.contains(h) {
                return ControlFlow::Continue(());
            }
            if st.map[p] != usize::MAX {
                if st.map[p] == h {
                    continue;
                }
                return ControlFlow::Continue(());
            }
            if st.used.contains(h) {
                return ControlFlow::Continue(());
            }
            st.map[p] = h;
            st.used.insert(h);
            if opts.side.is_some_and(|(s, _)| s.contains(h)) {
                st.hits += 1;
            }
        }
        for (a, b) in self.pattern.edges() {
            let (ha, hb) = (st.map[a], st.map[b]);
            if ha != usize::MAX && hb != usize::MAX && !self.host[ha].contains(hb) {
                return ControlFlow::Continue(());
            }
        }
        let start = st.map.iter().filter(|&&v| v != usize::MAX).count();
        self.descend(&mut st, start, &mut visit)
    }

    fn descend<F>(&self, st: &mut State<'_, '_>, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.n();
        if depth == k {
            return visit(&st.map);
        }
        let p = st.plan.order[depth];
        let mut cand = st.opts.allowed.clone();
        for &b in &st.plan.back[depth] {
            cand.intersect_with(&self.host[st.map[b]]);
        }
        cand.difference_with(&st.used);

        let mut hitting_first = false;
        if let Some((side, need)) = st.opts.side {
            let missing = need.saturating_sub(st.hits);
            let remaining = k - depth;
            if missing > remaining {
                return ControlFlow::Continue(());
            }
            if missing == remaining {
                cand.intersect_with(side);
            }
            hitting_first = missing > 0;
        }

        let need_deg = self.pattern.degree(p);
        let mut buf = std::mem::take(&mut st.buffers[depth]);
        buf.clear();
        if hitting_first {
            let side = st.opts.side.expect("side constraint").0;
            buf.extend(cand.iter().filter(|&v| side.contains(v)));
            buf.extend(cand.iter().filter(|&v| !side.contains(v)));
        } else {
            buf.extend(cand.iter());
        }

        let mut flow = ControlFlow::Continue(());
        for &v in &buf {
            if st.host_deg[v] < need_deg {
                continue;
            }
            let hit = st.opts.side.is_some_and(|(s, _)| s.contains(v));
            st.map[p] = v;
            st.used.insert(v);
            st.hits += hit as usize;
            flow = self.descend(st, depth + 1, visit);
            st.hits -= hit as usize;
            st.used.remove(v);
            st.map[p] = usize::MAX;
            if flow.is_break() {
                break;
            }
        }
        st.buffers[depth] = buf;
        flow
    }

    pub fn find(&self, opts: &SearchOpts<'_>) -> Option<Vec<usize>> {
        let mut found = None;
        let _ = self.for_each(opts, |map| {
            found = Some(map.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    /// Number of labelled embeddings.
    pub fn count_embeddings(&self, opts: &SearchOpts<'_>) -> u64 {
        let mut count = 0u64;
        let _ = self.for_each(opts, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        count
    }
}

/// First monochromatic copy of `H` inside `G[allowed]`, red before blue unless
/// `colour_filter` fixes the colour.
pub fn find_mono_copy(
    host: &ColouredGraph,
    pattern: &PatternStats,
    allowed: &VertexSet,
    colour_filter: Option<Colour>,
) -> Option<EmbeddedCopy> {
    let colours: &[Colour] = match colour_filter {
        Some(ref c) => std::slice::from_ref(c),
        None => &Colour::BOTH,
    };
    colours.iter().find_map(|&c| {
        find_copy(host, pattern, c, &SearchOpts::within(allowed))
    })
}

/// First copy of colour `colour` satisfying `opts`.
pub fn find_copy(
    host: &ColouredGraph,
    pattern: &PatternStats,
    colour: Colour,
    opts: &SearchOpts<'_>,
) -> Option<EmbeddedCopy> {
    Matcher::new(pattern.graph(), host.colour_adjacency(colour))
        .find(opts)
        .map(|vertex_map| EmbeddedCopy {
            vertex_map,
            colour: Some(colour),
        })
}

/// Number of monochromatic copies of `H` in colour `colour`, counted as
/// subgraphs (labelled embeddings divided by `|Aut(H)|`).
pub fn count_mono_copies(
    host: &ColouredGraph,
    pattern: &PatternStats,
    colour: Colour,
    budget: u128,
) -> Result<u64> {
    count_mono_copies_within(host, pattern, colour, &host.graph().vertices(), budget)
}

pub fn count_mono_copies_within(
    host: &ColouredGraph,
    pattern: &PatternStats,
    colour: Colour,
    allowed: &VertexSet,
    budget: u128,
) -> Result<u64> {
    let estimate = work_estimate(allowed.len(), pattern.k());
    if estimate > budget {
        return Err(Error::BudgetExceeded {
            what: "copy counting",
            estimate,
            budget,
        });
    }
    let matcher = Matcher::new(pattern.graph(), host.colour_adjacency(colour));
    let labelled = matcher.count_embeddings(&SearchOpts::within(allowed));
    Ok(labelled / pattern.automorphisms())
}

/// `n^k`, saturating.
pub fn work_estimate(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

/// Enumerates each distinct copy (as a subgraph) once: an embedding is kept
/// only if it is the lexicographically least among its automorphic images.
pub struct DistinctCopies {
    automorphisms: Vec<Vec<usize>>,
}

impl DistinctCopies {
    pub fn new(pattern: &Graph) -> Self {
        let all = VertexSet::full(pattern.n());
        let mut automorphisms = Vec::new();
        let _ = Matcher::new(pattern, pattern.adjacency()).for_each(&SearchOpts::within(&all), |m| {
            automorphisms.push(m.to_vec());
            ControlFlow::Continue(())
        });
        Self { automorphisms }
    }

    pub fn is_canonical(&self, map: &[usize]) -> bool {
        self.automorphisms.iter().all(|sigma| {
            // (map ∘ σ)[i] = map[σ[i]]
            for (i, &s) in sigma.iter().enumerate() {
                match map[s].cmp(&map[i]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    #[test]
    fn red_triangle_in_red_k5() {
        let g = ColouredGraph::monochromatic(k(5), Colour::Red);
        let h = PatternStats::clique(3);
        let all = g.graph().vertices();
        let c = find_mono_copy(&g, &h, &all, Some(Colour::Red)).unwrap();
        assert_eq!(c.colour, Some(Colour::Red));
        assert_eq!(EmbeddedCopy::classify(&g, h.graph(), &c.vertex_map), Some(c));
        assert!(find_mono_copy(&g, &h, &all, Some(Colour::Blue)).is_none());
    }

    #[test]
    fn c5_has_no_triangle_under_any_colouring() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let h = PatternStats::clique(3);
        for mask in 0..32 {
            let g = ColouredGraph::from_mask(&c5, mask);
            assert!(find_mono_copy(&g, &h, &g.graph().vertices(), None).is_none());
        }
    }

    #[test]
    fn subgraph_counts() {
        let h = PatternStats::clique(3);
        let red4 = ColouredGraph::monochromatic(k(4), Colour::Red);
        assert_eq!(count_mono_copies(&red4, &h, Colour::Red, DEFAULT_COUNT_BUDGET).unwrap(), 4);
        assert_eq!(count_mono_copies(&red4, &h, Colour::Blue, DEFAULT_COUNT_BUDGET).unwrap(), 0);
        let red6 = ColouredGraph::monochromatic(k(6), Colour::Red);
        assert_eq!(count_mono_copies(&red6, &h, Colour::Red, DEFAULT_COUNT_BUDGET).unwrap(), 20);
        // Paths with 3 edges in K4: 4!/2 = 12.
        let p4 = PatternStats::parse("p4").unwrap();
        assert_eq!(count_mono_copies(&red4, &p4, Colour::Red, DEFAULT_COUNT_BUDGET).unwrap(), 12);
    }

    #[test]
    fn count_refuses_over_budget() {
        let h = PatternStats::clique(3);
        let g = ColouredGraph::monochromatic(k(10), Colour::Red);
        assert!(matches!(
            count_mono_copies(&g, &h, Colour::Red, 999),
            Err(Error::BudgetExceeded { estimate: 1000, .. })
        ));
    }

    #[test]
    fn side_constraint_and_pins() {
        let g = ColouredGraph::monochromatic(k(6), Colour::Red);
        let h = PatternStats::parse("p4").unwrap();
        let all = g.graph().vertices();
        let side = VertexSet::from_vertices(6, [4, 5]);
        let m = Matcher::new(h.graph(), g.colour_adjacency(Colour::Red));
        let found = m.find(&SearchOpts::within(&all).hitting(&side, 2)).unwrap();
        assert_eq!(found.iter().filter(|v| side.contains(**v)).count(), 2);
        assert!(m.find(&SearchOpts::within(&all).hitting(&side, 3)).is_none());

        let pins = [(1, 3), (2, 0)];
        let found = m.find(&SearchOpts::within(&all).pinned(&pins)).unwrap();
        assert_eq!((found[1], found[2]), (3, 0));
        // Pinning two non-adjacent pattern vertices to a non-edge fails.
        let sparse = ColouredGraph::monochromatic(Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap(), Colour::Red);
        let m = Matcher::new(h.graph(), sparse.colour_adjacency(Colour::Red));
        let all = VertexSet::full(4);
        assert!(m.find(&SearchOpts::within(&all).pinned(&[(0, 0), (1, 2)])).is_none());
    }

    #[test]
    fn distinct_copy_filter_counts_subgraphs() {
        let g = ColouredGraph::monochromatic(k(5), Colour::Red);
        for name in ["k3", "p4", "c5", "matching-2"] {
            let h = PatternStats::parse(name).unwrap();
            let dc = DistinctCopies::new(h.graph());
            let all = g.graph().vertices();
            let mut distinct = 0;
            let _ = Matcher::new(h.graph(), g.colour_adjacency(Colour::Red)).for_each(&SearchOpts::within(&all), |m| {
                distinct += dc.is_canonical(m) as u64;
                ControlFlow::Continue(())
            });
            let total = count_mono_copies(&g, &h, Colour::Red, DEFAULT_COUNT_BUDGET).unwrap();
            assert_eq!(distinct, total, "{name}");
        }
    }
}
