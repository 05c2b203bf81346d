//! Command-line plumbing for the `minball` solvers.
//!
//! * [`format`]: the JSON instance file and its exact round trip.
//! * [`generate`]: reproducible random instances from a SplitMix64 stream.
//! * [`report`]: solve and verify documents, traces and exit codes.
//! * [`bench`]: seeded benchmark grids written as CSV.

pub mod bench;
pub mod error;
pub mod format;
pub mod generate;
pub mod report;

pub use error::{CliError, Result};
