//! Adversarial colourings, threshold sweeps and the on-disk oracle fixtures.

mod adversary;
mod fixtures;
mod sweep;

pub use adversary::{colour_uniform, colour_with, Adversary, AdversarySpec};
pub use fixtures::{
    evaluate_fixture, generate_fixtures, standard_fixture_requests, verify_fixtures, write_fixture, FixtureKey,
    FixtureRecord, FixtureReport, FixtureRequest,
};
pub use sweep::{run_sweep, wilson_interval, CellAggregate, SweepPlan, SweepResult, SweepRow, CSV_SCHEMA_VERSION};
