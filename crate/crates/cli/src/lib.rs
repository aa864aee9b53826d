//! Front end for `ehchan-core`: rate-vs-`q` sweeps written as CSV, SVG plots
//! of those tables, Monte Carlo codec checks and slot-trace dumps.

pub mod config;
mod error;
pub mod plot;
pub mod sweep;
pub mod trace_csv;
pub mod verify;

pub use config::SweepConfig;
pub use error::{CliError, Result};
pub use sweep::{sweep, CurveRow, CurveTable, CSV_HEADER};
