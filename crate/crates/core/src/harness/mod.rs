//! Instance generators and the proof-skeleton pipelines.

mod gen;
mod trace;

pub use gen::{dense_random_grid, generate, generate_set, instance_seed, Family, GeneratorSpec, Instance};
pub use trace::{run_beck_pipeline, run_incidence_pipeline, BeckStats, CaseTrace, Stage};
