use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour};
use crate::pattern::PatternStats;
use crate::vertex_set::VertexSet;

use super::copies::{CopyTable, NaiveCopy};
use super::mask_of;

/// Whether a copy is good for `(A, B)` under the colouring `red_mask`: red with
/// `≥ α` vertices in `A`, or blue with `≥ α` vertices in `B`.
pub(crate) fn is_good(copy: &NaiveCopy, red_mask: u64, a: u64, b: u64, alpha: usize) -> bool {
    if copy.vertex_mask & !(a | b) != 0 {
        return false;
    }
    // An edgeless pattern is monochromatic in both colours.
    let red = copy.edges.is_empty() || copy.colour_under(red_mask) == Some(Colour::Red);
    let blue = copy.edges.is_empty() || copy.colour_under(red_mask) == Some(Colour::Blue);
    (red && copy.hits(a) >= alpha) || (blue && copy.hits(b) >= alpha)
}

/// Number of `(A, B)`-good copies of `H` (as subgraphs) inside `G[A ∪ B]` for
/// any disjoint `A`, `B`.
pub fn good_copies_between(
    host: &ColouredGraph,
    pattern: &PatternStats,
    a: &VertexSet,
    b: &VertexSet,
    budget: u128,
) -> Result<u64> {
    if !a.is_disjoint(b) {
        return Err(Error::InvalidArgument("A and B must be disjoint".into()));
    }
    let table = CopyTable::build(host.graph(), pattern.graph(), budget)?;
    let red = table.red_mask(host)?;
    let (am, bm) = (mask_of(a), mask_of(b));
    Ok(table
        .copies
        .iter()
        .filter(|c| is_good(c, red, am, bm, pattern.alpha()))
        .count() as u64)
}

/// Number of `(A, B)`-good copies for a partition `A ∪ B = V(G)`. The sides may
/// differ in size by at most one, so odd hosts are allowed.
pub fn good_copy_count(
    host: &ColouredGraph,
    pattern: &PatternStats,
    a: &VertexSet,
    b: &VertexSet,
    budget: u128,
) -> Result<u64> {
    if a.union(b) != host.graph().vertices() || !a.is_disjoint(b) {
        return Err(Error::InvalidArgument("A and B must partition the host vertices".into()));
    }
    if a.len().abs_diff(b.len()) > 1 {
        return Err(Error::InvalidArgument(format!(
            "partition is unbalanced: |A| = {}, |B| = {}",
            a.len(),
            b.len()
        )));
    }
    good_copies_between(host, pattern, a, b, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn red_k6_has_nineteen() {
        let g = ColouredGraph::monochromatic(Graph::complete(6), Colour::Red);
        let k3 = PatternStats::clique(3);
        let a = VertexSet::from_vertices(6, [0, 2, 4]);
        let b = VertexSet::from_vertices(6, [1, 3, 5]);
        assert_eq!(good_copy_count(&g, &k3, &a, &b, u128::MAX).unwrap(), 19);
        assert_eq!(good_copy_count(&g.swapped(), &k3, &a, &b, u128::MAX).unwrap(), 19);
    }

    #[test]
    fn empty_host_has_none() {
        let g = ColouredGraph::monochromatic(Graph::empty(6), Colour::Red);
        let k3 = PatternStats::clique(3);
        let a = VertexSet::from_vertices(6, [0, 1, 2]);
        let b = VertexSet::from_vertices(6, [3, 4, 5]);
        assert_eq!(good_copy_count(&g, &k3, &a, &b, u128::MAX).unwrap(), 0);
    }

    #[test]
    fn partition_checks() {
        let g = ColouredGraph::monochromatic(Graph::complete(6), Colour::Red);
        let k3 = PatternStats::clique(3);
        let a = VertexSet::from_vertices(6, [0, 1]);
        let b = VertexSet::from_vertices(6, [3, 4, 5]);
        assert!(good_copy_count(&g, &k3, &a, &b, u128::MAX).is_err());
        let a = VertexSet::from_vertices(6, [0]);
        let b = VertexSet::from_vertices(6, [1, 2, 3, 4, 5]);
        assert!(good_copy_count(&g, &k3, &a, &b, u128::MAX).is_err());
    }
}
