use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour};
use crate::pattern::PatternStats;
use crate::search::{find_copy, DistinctCopies, EmbeddedCopy, Matcher, SearchOpts};
use crate::vertex_set::VertexSet;

/// Which input set a good copy meets in at least `α(H)` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideHit {
    /// A red copy meeting `X`.
    X,
    /// A blue copy meeting `Y`.
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodCopy {
    pub copy: EmbeddedCopy,
    pub side_hit: SideHit,
}

/// Looks inside `G[X ∪ Y]` for a red copy with `≥ α` vertices in `X`, then for
/// a blue copy with `≥ α` vertices in `Y`. `None` means `(X, Y)` witnesses a
/// failure of richness.
pub fn richness_probe(
    host: &ColouredGraph,
    pattern: &PatternStats,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<Option<GoodCopy>> {
    if !x.is_disjoint(y) {
        return Err(Error::InvalidArgument("probe sets must be disjoint".into()));
    }
    Ok(probe_ordered(host, pattern, x, y, [SideHit::X, SideHit::Y]))
}

pub(crate) fn probe_ordered(
    host: &ColouredGraph,
    pattern: &PatternStats,
    x: &VertexSet,
    y: &VertexSet,
    order: [SideHit; 2],
) -> Option<GoodCopy> {
    let allowed = x.union(y);
    order.into_iter().find_map(|side_hit| {
        let (colour, side) = match side_hit {
            SideHit::X => (Colour::Red, x),
            SideHit::Y => (Colour::Blue, y),
        };
        let opts = SearchOpts::within(&allowed).hitting(side, pattern.alpha());
        find_copy(host, pattern, colour, &opts).map(|copy| GoodCopy { copy, side_hit })
    })
}

/// Outcome of a budgeted tie search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieSearch {
    Found { red: EmbeddedCopy, blue: EmbeddedCopy },
    Absent,
    OutOfBudget,
}

/// Searches `G[allowed]` for a red and a blue copy of `H` sharing at least
/// `α(H)` vertices, so that together they span at most `2k − α` vertices.
///
/// Every distinct red copy is tried as the anchor; each anchor costs one unit
/// of `budget`.
pub fn find_tie(
    host: &ColouredGraph,
    pattern: &PatternStats,
    allowed: &VertexSet,
    budget: &mut u64,
) -> TieSearch {
    let distinct = DistinctCopies::new(pattern.graph());
    let red = Matcher::new(pattern.graph(), host.colour_adjacency(Colour::Red));
    let blue = Matcher::new(pattern.graph(), host.colour_adjacency(Colour::Blue));
    let mut result = TieSearch::Absent;
    let _ = red.for_each(&SearchOpts::within(allowed), |map| {
        if !distinct.is_canonical(map) {
            return ControlFlow::Continue(());
        }
        if *budget == 0 {
            result = TieSearch::OutOfBudget;
            return ControlFlow::Break(());
        }
        *budget -= 1;
        let anchor = VertexSet::from_vertices(host.n(), map.iter().copied());
        let opts = SearchOpts::within(allowed).hitting(&anchor, pattern.alpha());
        match blue.find(&opts) {
            Some(b) => {
                result = TieSearch::Found {
                    red: EmbeddedCopy {
                        vertex_map: map.to_vec(),
                        colour: Some(Colour::Red),
                    },
                    blue: EmbeddedCopy {
                        vertex_map: b,
                        colour: Some(Colour::Blue),
                    },
                };
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    result
}

/// Two triangles of different colours sharing exactly one vertex, avoiding
/// `forbidden`. Only defined for `H = K₃`.
pub fn find_bowtie(
    host: &ColouredGraph,
    pattern: &PatternStats,
    forbidden: &VertexSet,
) -> Result<Option<(EmbeddedCopy, EmbeddedCopy)>> {
    if !(pattern.k() == 3 && pattern.is_clique()) {
        return Err(Error::InvalidArgument(format!(
            "bow ties are defined for k3 only, got {}",
            pattern.name()
        )));
    }
    let allowed = host.graph().vertices().difference(forbidden);
    let mut unlimited = u64::MAX;
    Ok(match find_tie(host, pattern, &allowed, &mut unlimited) {
        TieSearch::Found { red, blue } => Some((red, blue)),
        _ => None,
    })
}
