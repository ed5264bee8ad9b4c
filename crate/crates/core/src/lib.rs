//! Monochromatic `H`-tilings in 2-coloured graphs.
//!
//! The crate is split into four layers:
//!
//! * graph substrate: [`graph`], [`vertex_set`], [`sample`], [`pattern`], [`search`];
//! * [`tiling`]: richness probes, the cluster-building process, cluster
//!   families and full tiling extraction;
//! * [`oracles`]: brute-force ground truth on small instances;
//! * [`experiment`]: adversarial colourings, threshold sweeps and fixtures.

pub mod error;
pub mod experiment;
pub mod graph;
pub mod oracles;
pub mod pattern;
pub mod sample;
pub mod search;
pub mod tiling;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{ColouredGraph, Colour, Graph};
pub use pattern::PatternStats;
pub use search::EmbeddedCopy;
pub use vertex_set::VertexSet;
