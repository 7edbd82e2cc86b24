//! Run orchestration: execute the recursion, always write the trace,
//! optionally write the raster, and map outcomes onto exit codes.

use std::path::Path;

use mpi_core::engine::{compute_mpi, MpiResult, MpiStatus};

use crate::error::{CliError, Result};
use crate::problem_file::LoadedProblem;
use crate::raster::{rasterize, to_csv};
use crate::trace::{build_trace, to_json, TraceDoc};

/// Exit codes of the `run` subcommand (and the binary overall).
pub mod exit_code {
    pub const CONVERGED: i32 = 0;
    pub const UNSUCCESSFUL: i32 = 2;
    pub const EMPTY: i32 = 3;
    pub const INVALID_INPUT: i32 = 4;
    pub const IO: i32 = 5;
    pub const NOT_INVARIANT: i32 = 6;
    pub const INCONCLUSIVE: i32 = 7;
}

pub fn status_exit_code(status: MpiStatus) -> i32 {
    match status {
        MpiStatus::Converged => exit_code::CONVERGED,
        MpiStatus::Unsuccessful => exit_code::UNSUCCESSFUL,
        MpiStatus::Empty => exit_code::EMPTY,
    }
}

pub struct RunOutput {
    pub result: MpiResult,
    pub trace: TraceDoc,
    pub exit: i32,
}

/// Executes a loaded problem and writes the requested artifacts.
/// The trace is always written; the raster only when a grid resolution is
/// configured (2-D problems only).
pub fn run(
    loaded: &LoadedProblem,
    trace_path: &Path,
    raster_path: Option<&Path>,
) -> Result<RunOutput> {
    if raster_path.is_some() && loaded.grid.is_none() {
        return Err(CliError::InvalidInput(
            "raster output requested without a grid resolution (set --grid or options.grid)"
                .into(),
        ));
    }
    let result = compute_mpi(&loaded.problem)?;
    let trace = build_trace(&loaded.doc, &result);
    std::fs::write(trace_path, to_json(&trace)).map_err(CliError::io(trace_path))?;

    if let (Some(path), Some(grid)) = (raster_path, loaded.grid) {
        let window = loaded
            .raster_box
            .clone()
            .unwrap_or_else(|| loaded.problem.domain_box.clone());
        let raster = rasterize(&result, &window, grid)?;
        std::fs::write(path, to_csv(&raster)).map_err(CliError::io(path))?;
    }

    let exit = status_exit_code(result.status);
    Ok(RunOutput {
        result,
        trace,
        exit,
    })
}
