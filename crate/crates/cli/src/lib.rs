//! Problem-file ingestion, run orchestration, trace emission, and
//! membership-raster export for the `mpi` binary.

pub mod error;
pub mod problem_file;
pub mod raster;
pub mod run;
pub mod trace;

pub use error::{CliError, Result};
