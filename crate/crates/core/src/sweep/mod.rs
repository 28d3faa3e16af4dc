//! Capacity sweeps: grid construction, per-cell fitting, aggregation and
//! CSV output.

mod config;
mod csvio;
mod grid;
mod run;
mod summary;

pub use config::{DataSource, Experiment, ExperimentKind, GridSpec, SweepConfig};
pub use csvio::{
    format_f64, read_records, read_summary, summary_file_name, write_records, write_summary, RECORD_COLUMNS,
    SUMMARY_COLUMNS,
};
pub use grid::{build_grid, nearest_ratio};
pub use run::{
    cell_seed, evaluate_capacity, fit_baseline, run_sweep, run_sweep_with, Baseline, PreparedData, SweepRecord,
    SweepRun,
};
pub use summary::{quantile, summarize, Metric, SummaryRow, SweepSummary};
