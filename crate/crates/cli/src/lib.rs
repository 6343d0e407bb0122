//! Batch front end for `bp-core`: factorizations, pointwise evaluations, grid
//! sweeps and the verification suites.

pub mod commands;
pub mod error;
pub mod grid;
pub mod io;
pub mod preset;
pub mod verify;

pub use commands::{run, Cli, Outcome};
pub use error::{CliError, CliResult};
pub use preset::Preset;

/// Size of the worker pool: `BP_THREADS` if set to a positive integer,
/// otherwise rayon's default.
pub fn thread_count() -> Option<usize> {
    std::env::var("BP_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
