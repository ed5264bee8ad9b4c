//! Brute-force ground truth on small instances.
//!
//! Everything here is deliberately naive and independent of [`crate::search`]:
//! copies are found by trying every injective map, colourings are plain
//! bitmasks over the host's lexicographic edge list, and vertex sets are `u64`
//! masks. Hosts are therefore limited to 64 vertices and, where colourings are
//! enumerated, 64 edges.

mod aux;
mod copies;
mod good;
mod richness;
mod rt;
mod supersat;

pub use aux::{aux_degree_check, build_aux_hypergraph, AuxDegreeReport, AuxHypergraph, DegreeRow};
pub use copies::{naive_m2_density, CopyTable, NaiveCopy};
pub use good::{good_copies_between, good_copy_count};
pub use richness::{richness_decide, RichnessCounterexample, RichnessVerdict};
pub use rt::{exact_rt, max_tiling_size, RtValue};
pub use supersat::{clique_count, clique_supersat_count, SupersatParams, SupersatReport};

/// Largest host the mask-based oracles accept.
pub const MASK_CEILING: usize = 64;

pub(crate) fn mask_of(set: &crate::VertexSet) -> u64 {
    set.iter().fold(0u64, |m, v| m | (1 << v))
}
