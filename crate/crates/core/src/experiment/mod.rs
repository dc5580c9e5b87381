//! Monte Carlo harness: configuration, batch runs, persistence, summaries
//! and plots.
//!
//! Trials run in parallel, one worker per trial, and are gathered in the
//! canonical `(n, p-rule, trial)` order, so output bytes depend only on the
//! configuration.

mod config;
mod plot;
mod records;
mod run;
mod summary;
mod tails;

pub use config::{ExperimentConfig, Format, PRule};
pub use plot::{plot_ratio, plot_ratio_series, render_ratio_svg};
pub use records::{
    format_real, read_records, read_records_from, write_records, write_records_to, TrialRecord,
    CSV_COLUMNS,
};
pub use run::{
    locality_path, persist_run, rule_labeller, run_experiment, run_experiment_full, run_trial,
    LocalityRow, RunOutput, LOCALITY_FULL_SCAN_MAX_N, LOCALITY_SAMPLE_SIZE,
};
pub use summary::{median, summarize, write_summary_to, SummaryRow, SUMMARY_COLUMNS};
pub use tails::{sample_max_degrees, tail_table, write_tail_csv, TailRow, TAIL_COLUMNS};
