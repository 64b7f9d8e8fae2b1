//! Configuration, parameter sweeps, CSV output and the command-line tool.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{GainOverrides, RunConfig, SweepSettings};
pub use output::{csv_string, format_number, write_csv, CSV_HEADER};
pub use sweep::{db_to_ratio, run_sweep, SchemeSelection, SweepKind, SweepRow, SweepSpec, DEFAULT_POINTS};
