//! Scenario runner: generates corpus data, runs a pipeline over sampled points
//! and writes reproducible reports.

pub mod error;
pub mod generate;
pub mod pipeline;
pub mod report;
pub mod scenario;

pub use error::{GmtError, Result};
pub use generate::{cantor_intervals, families, fat_cantor_intervals, realize, sample_points};
pub use pipeline::{run_scenario, trend, Outcome, Report, Trend};
pub use report::{report_csv, report_json, summary, write_artifacts};
pub use scenario::{Generator, GridSpec, Overrides, Pipeline, Points, Scenario, Tensor};
