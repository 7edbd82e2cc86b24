//! Machine-readable trace of one run: problem echo, per-iteration certified
//! bounds, final status, and the final set description. JSON throughout;
//! floats are serialized as JSON numbers (shortest round-trip encoding, so
//! the exact f64 is recoverable) and witness points as exact `p/q` strings.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use mpi_core::engine::{
    Emptiness, Iterate, IterationRecord, MpiResult, MpiStatus,
};
use mpi_core::globopt::{BoundStatus, CertifiedBound};
use mpi_core::parse::parse_polynomial;
use mpi_core::semialg::{ImplicitChain, SemialgebraicSet};
use mpi_core::PolyMap;

use crate::error::{CliError, Result};
use crate::problem_file::ProblemDoc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceDoc {
    pub problem: ProblemDoc,
    pub iterations: Vec<IterationDoc>,
    pub status: String,
    pub k_final: u32,
    pub omega: OmegaDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationDoc {
    pub k: u32,
    pub constraint_count: usize,
    pub emptiness: String,
    pub bounds: Vec<BoundDoc>,
    pub delta: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundDoc {
    pub lower: f64,
    pub upper: f64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub nodes: u64,
}

/// Final set description: explicit constraint strings, or the implicit
/// (base, dynamics, depth) triple. Re-parsing `constraints` reproduces the
/// canonical explicit set exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaDoc {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
}

fn status_str(s: MpiStatus) -> &'static str {
    match s {
        MpiStatus::Converged => "converged",
        MpiStatus::Unsuccessful => "unsuccessful",
        MpiStatus::Empty => "empty",
    }
}

fn bound_status_str(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Converged => "converged",
        BoundStatus::BudgetExhausted => "budget_exhausted",
        BoundStatus::InfeasibleCertified => "infeasible_certified",
    }
}

fn emptiness_str(e: &Emptiness) -> &'static str {
    match e {
        Emptiness::Nonempty => "nonempty",
        Emptiness::EmptyCertified => "empty_certified",
        Emptiness::Unknown => "unknown",
    }
}

fn rational_str(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_rational_str(s: &str) -> Result<BigRational> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| CliError::InvalidInput(format!("bad rational: {s}")))?;
    let n = n
        .parse()
        .map_err(|_| CliError::InvalidInput(format!("bad rational: {s}")))?;
    let d = d
        .parse()
        .map_err(|_| CliError::InvalidInput(format!("bad rational: {s}")))?;
    Ok(BigRational::new(n, d))
}

fn bound_doc(b: &CertifiedBound) -> BoundDoc {
    BoundDoc {
        lower: b.lower,
        upper: b.upper,
        status: bound_status_str(b.status).into(),
        witness: b
            .witness
            .as_ref()
            .map(|w| w.iter().map(rational_str).collect()),
        nodes: b.nodes,
    }
}

fn iteration_doc(r: &IterationRecord) -> IterationDoc {
    IterationDoc {
        k: r.k,
        constraint_count: r.constraint_count,
        emptiness: emptiness_str(&r.emptiness).into(),
        bounds: r.bounds.iter().map(bound_doc).collect(),
        delta: r.delta,
        wall_time_s: r.wall_time.as_secs_f64(),
    }
}

pub fn build_trace(problem_doc: &ProblemDoc, result: &MpiResult) -> TraceDoc {
    let omega = match &result.omega {
        Iterate::Explicit(s) => OmegaDoc {
            mode: "explicit".into(),
            constraints: Some(s.constraints().iter().map(|p| p.to_string()).collect()),
            depth: None,
        },
        Iterate::Implicit(c) => OmegaDoc {
            mode: "implicit".into(),
            constraints: None,
            depth: Some(c.depth()),
        },
    };
    TraceDoc {
        problem: problem_doc.clone(),
        iterations: result.trace.iter().map(iteration_doc).collect(),
        status: status_str(result.status).into(),
        k_final: result.k_final,
        omega,
    }
}

pub fn to_json(trace: &TraceDoc) -> String {
    serde_json::to_string_pretty(trace).expect("trace documents always serialize")
}

pub fn from_json(text: &str) -> Result<TraceDoc> {
    serde_json::from_str(text).map_err(|e| CliError::InvalidInput(format!("trace file: {e}")))
}

/// Reconstructs the final set from a trace, for the independent audit.
pub fn omega_from_trace(trace: &TraceDoc) -> Result<Iterate> {
    let n = trace.problem.variables;
    match trace.omega.mode.as_str() {
        "explicit" => {
            let strings = trace.omega.constraints.as_ref().ok_or_else(|| {
                CliError::InvalidInput("explicit omega without constraints".into())
            })?;
            let polys = strings
                .iter()
                .map(|s| parse_polynomial(s, n).map_err(CliError::from))
                .collect::<Result<Vec<_>>>()?;
            Ok(Iterate::Explicit(SemialgebraicSet::new(polys)?))
        }
        "implicit" => {
            let depth = trace
                .omega
                .depth
                .ok_or_else(|| CliError::InvalidInput("implicit omega without depth".into()))?;
            let base = PolyMap::new(
                trace
                    .problem
                    .constraints
                    .iter()
                    .map(|s| parse_polynomial(s, n).map_err(CliError::from))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let dynamics = PolyMap::new(
                trace
                    .problem
                    .dynamics
                    .iter()
                    .map(|s| parse_polynomial(s, n).map_err(CliError::from))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            Ok(Iterate::Implicit(ImplicitChain::new(base, dynamics, depth)?))
        }
        other => Err(CliError::InvalidInput(format!("unknown omega mode: {other}"))),
    }
}

/// Witness points from a trace, usable as exact rationals again.
pub fn parse_witness(doc: &BoundDoc) -> Result<Option<Vec<BigRational>>> {
    doc.witness
        .as_ref()
        .map(|w| w.iter().map(|s| parse_rational_str(s)).collect())
        .transpose()
}
