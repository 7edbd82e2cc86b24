use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mpi_cli::error::CliError;
use mpi_cli::problem_file::{parse_problem, LoadedProblem};
use mpi_cli::run::{exit_code, run};
use mpi_cli::trace::{from_json, omega_from_trace};

use mpi_core::engine::{verify_invariance, InvarianceOutcome, Mode, MpiStatus};
use mpi_core::globopt::{
    check_bounded, check_nonempty, find_fixed_point, BoundednessReport, NonemptyReport, SetRepr,
};
use mpi_core::semialg::SemialgebraicSet;

/// Computes maximal positively invariant sets of polynomial discrete-time
/// dynamics under basic semialgebraic state constraints.
#[derive(Parser)]
#[command(name = "mpi", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Explicit,
    Implicit,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the set recursion and emit a trace (and optionally a raster).
    Run {
        problem: PathBuf,
        /// Trace output path (JSON).
        #[arg(long)]
        trace: PathBuf,
        /// Raster output path (CSV); requires a grid resolution.
        #[arg(long)]
        raster: Option<PathBuf>,
        /// Grid resolution for the raster (NxN).
        #[arg(long)]
        grid: Option<u32>,
        /// Iterate representation.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Termination margin (test passes when delta >= epsilon).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Maximum number of iterations.
        #[arg(long)]
        kmax: Option<u32>,
        /// Enable per-iteration redundancy reduction.
        #[arg(long)]
        reduce: bool,
        /// Force single-ordered processing of subproblems.
        #[arg(long)]
        deterministic: bool,
    },
    /// Parse a problem and report nonemptiness, boundedness, and fixed
    /// points of the constraint set.
    Check { problem: PathBuf },
    /// Audit a finished run: independently certify that the trace's final
    /// set is positively invariant.
    Verify { problem: PathBuf, trace: PathBuf },
}

fn load(path: &Path) -> Result<LoadedProblem, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_problem(&text)
}

fn error_code(e: &CliError) -> i32 {
    match e {
        CliError::InvalidInput(_) => exit_code::INVALID_INPUT,
        CliError::Io { .. } => exit_code::IO,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Run {
            problem,
            trace,
            raster,
            grid,
            mode,
            epsilon,
            kmax,
            reduce,
            deterministic,
        } => {
            let mut loaded = load(&problem)?;
            if let Some(m) = mode {
                loaded.problem.mode = match m {
                    ModeArg::Explicit => Mode::Explicit,
                    ModeArg::Implicit => Mode::Implicit,
                };
                loaded.doc.options.mode = match m {
                    ModeArg::Explicit => "explicit".into(),
                    ModeArg::Implicit => "implicit".into(),
                };
            }
            if let Some(e) = epsilon {
                loaded.problem.epsilon = e;
                loaded.doc.options.epsilon = e;
            }
            if let Some(k) = kmax {
                loaded.problem.k_max = k;
                loaded.doc.options.k_max = k;
            }
            if reduce {
                loaded.problem.reduction = true;
                loaded.doc.options.reduction = true;
            }
            if deterministic {
                loaded.problem.solver.deterministic = true;
                loaded.doc.options.deterministic = true;
            }
            if let Some(g) = grid {
                loaded.grid = Some(g);
                loaded.doc.options.grid = Some(g);
            }
            let out = run(&loaded, &trace, raster.as_deref())?;
            let status = match out.result.status {
                MpiStatus::Converged => "converged",
                MpiStatus::Unsuccessful => "unsuccessful",
                MpiStatus::Empty => "empty",
            };
            println!(
                "status: {status}  k_final: {}  constraints: {}",
                out.result.k_final,
                out.result.omega.constraint_count()
            );
            for rec in &out.result.trace {
                println!(
                    "  k = {}: constraints = {}, delta = {:+.6e}, emptiness = {:?}, {:.2}s",
                    rec.k,
                    rec.constraint_count,
                    rec.delta,
                    rec.emptiness,
                    rec.wall_time.as_secs_f64()
                );
            }
            Ok(out.exit)
        }
        Cmd::Check { problem } => {
            let loaded = load(&problem)?;
            let pr = &loaded.problem;
            println!(
                "problem: n = {}, m = {}, deg f = {}, deg phi0 = {}",
                pr.n(),
                pr.m(),
                pr.f.max_degree(),
                pr.phi0.max_degree()
            );
            let x0 = SemialgebraicSet::from_map(&pr.phi0);
            let repr = SetRepr::Explicit(&x0);

            match check_nonempty(repr, &pr.domain_box, &pr.solver)? {
                NonemptyReport::Nonempty { witness } => {
                    println!("nonemptiness: nonempty, witness = {}", point_str(&witness));
                }
                NonemptyReport::EmptyCertified => {
                    println!("nonemptiness: empty (certified)");
                    return Ok(0);
                }
                NonemptyReport::Unknown => println!("nonemptiness: unknown (budget)"),
            }

            match check_bounded(repr, &pr.domain_box, &pr.solver)? {
                BoundednessReport::EmptyCertified => println!("boundedness: set is empty"),
                BoundednessReport::Directions(dirs) => {
                    for d in dirs {
                        println!(
                            "boundedness: dir = {} max in [{:+.6e}, {:+.6e}]{}",
                            point_str(&d.direction),
                            d.attained,
                            d.upper,
                            if d.touches_box_boundary {
                                "  (touches search box: inconclusive)"
                            } else {
                                ""
                            }
                        );
                    }
                }
            }

            let fp = find_fixed_point(&pr.f, repr, &pr.domain_box, &pr.solver)?;
            match (&fp.witness, fp.upper == 0.0) {
                (Some(w), true) => println!(
                    "fixed point: residual 0 at {} (certified interval [{:+.3e}, {:+.3e}])",
                    point_str(w),
                    fp.lower,
                    fp.upper
                ),
                _ => println!(
                    "fixed point: residual in [{:+.6e}, {:+.6e}] (status {:?})",
                    fp.lower, fp.upper, fp.status
                ),
            }
            Ok(0)
        }
        Cmd::Verify { problem, trace } => {
            let loaded = load(&problem)?;
            let text = std::fs::read_to_string(&trace).map_err(CliError::io(&trace))?;
            let tdoc = from_json(&text)?;
            let omega = omega_from_trace(&tdoc)?;
            let report = verify_invariance(
                &omega,
                &loaded.problem.f,
                &loaded.problem.phi0,
                &loaded.problem.domain_box,
                &loaded.problem.solver,
            )?;
            let worst_image = report
                .image_checks
                .iter()
                .map(|b| b.lower)
                .fold(f64::INFINITY, f64::min);
            let worst_containment = report
                .containment_checks
                .iter()
                .map(|b| b.lower)
                .fold(f64::INFINITY, f64::min);
            println!(
                "invariance audit: image min >= {worst_image:+.6e}, containment min >= {worst_containment:+.6e}"
            );
            match report.outcome {
                InvarianceOutcome::Invariant => {
                    println!("verdict: positively invariant (certified)");
                    Ok(0)
                }
                InvarianceOutcome::NotInvariant => {
                    println!("verdict: NOT invariant (certified counterexample)");
                    Ok(exit_code::NOT_INVARIANT)
                }
                InvarianceOutcome::Inconclusive => {
                    println!("verdict: inconclusive (budget exhausted)");
                    Ok(exit_code::INCONCLUSIVE)
                }
            }
        }
    }
}

fn point_str(x: &[num_rational::BigRational]) -> String {
    let coords: Vec<String> = x.iter().map(|q| q.to_string()).collect();
    format!("({})", coords.join(", "))
}
