//! Experiment driver: configuration, single runs, convergence ladders and
//! oracle suites.

pub mod config;
pub mod experiment;
pub mod ladder;
pub mod table;
pub mod validate;

pub use config::{FieldKind, ProblemKind, RunConfig};
pub use experiment::{Experiment, Reference};
pub use ladder::{benchmark_tables, field_samples, run_single, run_table, steps_for, RunOutcome};
pub use table::{ao_rate, co_rate, ConvergenceTable, Ladder, TableRow};
