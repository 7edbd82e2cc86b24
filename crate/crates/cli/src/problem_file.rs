//! Problem-file ingestion and emission.
//!
//! A problem file is TOML with four required sections — `variables`,
//! `dynamics`, `constraints`, `domain_box` — and an optional `[options]`
//! table. Polynomials are strings in the term syntax (`3/2*x1^2*x2 - x2 + 1`);
//! box endpoints accept integers, floats (taken at their exact binary
//! value), or `"p/q"` strings. Unknown keys are rejected.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use mpi_core::engine::{Mode, Problem};
use mpi_core::globopt::SolverConfig;
use mpi_core::interval::BoxRegion;
use mpi_core::parse::parse_polynomial;
use mpi_core::PolyMap;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub variables: usize,
    pub dynamics: Vec<String>,
    pub constraints: Vec<String>,
    pub domain_box: Vec<[RatLit; 2]>,
    #[serde(default)]
    pub options: OptionsDoc,
}

/// A rational literal in TOML: integer, float, or "p/q" string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Float(f64),
    Str(String),
}

impl RatLit {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RatLit::Int(i) => Ok(mpi_core::rat(*i)),
            RatLit::Float(f) => BigRational::from_float(*f).ok_or_else(|| {
                CliError::InvalidInput(format!("non-finite box endpoint: {f}"))
            }),
            RatLit::Str(s) => {
                let s = s.trim();
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s, "1"),
                };
                let n: num_bigint_parse::Big = num
                    .parse()
                    .map_err(|_| CliError::InvalidInput(format!("bad rational literal: {s}")))?;
                let d: num_bigint_parse::Big = den
                    .parse()
                    .map_err(|_| CliError::InvalidInput(format!("bad rational literal: {s}")))?;
                if d.0 == 0.into() {
                    return Err(CliError::InvalidInput(format!(
                        "zero denominator in rational literal: {s}"
                    )));
                }
                Ok(BigRational::new(n.0, d.0))
            }
        }
    }

    pub fn from_rational(q: &BigRational) -> RatLit {
        if num_traits::One::is_one(q.denom()) {
            if let Ok(i) = i64::try_from(q.numer().clone()) {
                return RatLit::Int(i);
            }
        }
        RatLit::Str(format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Tiny shim so string parsing of big integers routes through num-bigint.
mod num_bigint_parse {
    pub struct Big(pub num_bigint::BigInt);
    impl std::str::FromStr for Big {
        type Err = ();
        fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
            s.parse::<num_bigint::BigInt>().map(Big).map_err(|_| ())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptionsDoc {
    pub epsilon: f64,
    pub k_max: u32,
    pub mode: String,
    pub reduction: bool,
    pub gap_tol: f64,
    pub min_width: f64,
    pub max_nodes: u64,
    pub deterministic: bool,
    /// Raster resolution; raster output is produced only when set.
    pub grid: Option<u32>,
    /// Raster window; defaults to the domain box.
    pub raster_box: Option<Vec<[RatLit; 2]>>,
}

impl Default for OptionsDoc {
    fn default() -> Self {
        OptionsDoc {
            epsilon: 0.0,
            k_max: 10,
            mode: "explicit".into(),
            reduction: false,
            gap_tol: 1e-6,
            min_width: 1e-9,
            max_nodes: 1_000_000,
            deterministic: true,
            grid: None,
            raster_box: None,
        }
    }
}

/// The parsed problem plus the raster options that ride along with it.
#[derive(Debug, Clone)]
pub struct LoadedProblem {
    pub problem: Problem,
    pub grid: Option<u32>,
    pub raster_box: Option<BoxRegion>,
    /// Canonical echo of the document, for the trace file.
    pub doc: ProblemDoc,
}

fn parse_box(entries: &[[RatLit; 2]], n: usize, what: &str) -> Result<BoxRegion> {
    if entries.len() != n {
        return Err(CliError::InvalidInput(format!(
            "{what} has {} interval pairs, expected {n}",
            entries.len()
        )));
    }
    let bounds = entries
        .iter()
        .map(|[lo, hi]| Ok((lo.to_rational()?, hi.to_rational()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoxRegion::new(bounds)?)
}

/// Parses a problem document from TOML text, checking every invariant.
pub fn parse_problem(text: &str) -> Result<LoadedProblem> {
    let doc: ProblemDoc = toml::from_str(text)
        .map_err(|e| CliError::InvalidInput(format!("problem file: {e}")))?;
    load_doc(doc)
}

fn load_doc(doc: ProblemDoc) -> Result<LoadedProblem> {
    let n = doc.variables;
    if n == 0 {
        return Err(CliError::InvalidInput("variables must be at least 1".into()));
    }
    if doc.dynamics.len() != n {
        return Err(CliError::InvalidInput(format!(
            "dynamics has {} components, expected {n}",
            doc.dynamics.len()
        )));
    }
    if doc.constraints.is_empty() {
        return Err(CliError::InvalidInput("constraints must be nonempty".into()));
    }
    let parse_all = |strings: &[String], what: &str| -> Result<Vec<mpi_core::Polynomial>> {
        strings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_polynomial(s, n).map_err(|e| {
                    CliError::InvalidInput(format!("{what}[{i}] \"{s}\": {e}"))
                })
            })
            .collect()
    };
    let f = PolyMap::new(parse_all(&doc.dynamics, "dynamics")?)?;
    let phi0 = PolyMap::new(parse_all(&doc.constraints, "constraints")?)?;
    let domain_box = parse_box(&doc.domain_box, n, "domain_box")?;
    let mode = match doc.options.mode.as_str() {
        "explicit" => Mode::Explicit,
        "implicit" => Mode::Implicit,
        other => {
            return Err(CliError::InvalidInput(format!(
                "mode must be \"explicit\" or \"implicit\", found \"{other}\""
            )))
        }
    };
    if let Some(g) = doc.options.grid {
        if g < 2 {
            return Err(CliError::InvalidInput("grid resolution must be >= 2".into()));
        }
    }
    let raster_box = match &doc.options.raster_box {
        Some(rb) => Some(parse_box(rb, n, "raster_box")?),
        None => None,
    };
    let problem = Problem {
        f,
        phi0,
        domain_box,
        epsilon: doc.options.epsilon,
        k_max: doc.options.k_max,
        mode,
        reduction: doc.options.reduction,
        solver: SolverConfig {
            gap_tol: doc.options.gap_tol,
            min_width: doc.options.min_width,
            max_nodes: doc.options.max_nodes,
            deterministic: doc.options.deterministic,
        },
    };
    problem.validate()?;
    let canonical = canonical_doc(&problem, &doc);
    Ok(LoadedProblem {
        problem,
        grid: doc.options.grid,
        raster_box,
        doc: canonical,
    })
}

/// Re-renders the document with canonical polynomial strings and box
/// literals, so emit → parse is the identity on problems.
fn canonical_doc(problem: &Problem, doc: &ProblemDoc) -> ProblemDoc {
    ProblemDoc {
        variables: problem.n(),
        dynamics: problem
            .f
            .components()
            .iter()
            .map(|p| p.to_string())
            .collect(),
        constraints: problem
            .phi0
            .components()
            .iter()
            .map(|p| p.to_string())
            .collect(),
        domain_box: problem
            .domain_box
            .bounds()
            .iter()
            .map(|(lo, hi)| [RatLit::from_rational(lo), RatLit::from_rational(hi)])
            .collect(),
        options: doc.options.clone(),
    }
}

/// Serializes a canonical document back to TOML.
pub fn emit_problem(doc: &ProblemDoc) -> String {
    toml::to_string_pretty(doc).expect("problem documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
variables = 2

dynamics = [
  "1/2*x1 - x1^2 - x2",
  "-x1^4 + x1^3 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 - x2^2 + 1/2*x2",
]

constraints = ["1 - x1 - x2", "1 + x1 - x2", "1 + x1 + x2", "1 - x1 + x2"]

domain_box = [[-2, 2], [-2, 2]]

[options]
epsilon = 0.0
k_max = 10
"#;

    #[test]
    fn parses_the_bundled_example_shape() {
        let loaded = parse_problem(EXAMPLE).unwrap();
        assert_eq!(loaded.problem.n(), 2);
        assert_eq!(loaded.problem.m(), 4);
        assert_eq!(loaded.problem.k_max, 10);
        assert_eq!(loaded.problem.mode, Mode::Explicit);
        assert!(!loaded.problem.reduction);
    }

    #[test]
    fn missing_dynamics_is_a_parse_error() {
        let text = "variables = 2\nconstraints = [\"1 - x1\"]\ndomain_box = [[-1,1],[-1,1]]\n";
        assert!(parse_problem(text).is_err());
    }

    #[test]
    fn out_of_range_variable_is_a_dimension_error() {
        let text = r#"
variables = 2
dynamics = ["x1", "x2"]
constraints = ["1 - x3"]
domain_box = [[-1, 1], [-1, 1]]
"#;
        let err = parse_problem(text).unwrap_err().to_string();
        assert!(err.contains("dimension"), "got: {err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!("{EXAMPLE}\nextra_key = 1\n");
        assert!(parse_problem(&text).is_err());
        let bad_opt = EXAMPLE.replace("k_max = 10", "k_max = 10\nmystery = true");
        assert!(parse_problem(&bad_opt).is_err());
    }

    #[test]
    fn roundtrip_emit_parse_identity() {
        let loaded = parse_problem(EXAMPLE).unwrap();
        let emitted = emit_problem(&loaded.doc);
        let reloaded = parse_problem(&emitted).unwrap();
        assert_eq!(loaded.problem.f, reloaded.problem.f);
        assert_eq!(loaded.problem.phi0, reloaded.problem.phi0);
        assert_eq!(loaded.problem.domain_box, reloaded.problem.domain_box);
        assert_eq!(loaded.doc.dynamics, reloaded.doc.dynamics);
    }

    #[test]
    fn rational_string_endpoints() {
        let text = EXAMPLE.replace("[[-2, 2], [-2, 2]]", "[[\"-21/20\", \"21/20\"], [-2, 2.5]]");
        let loaded = parse_problem(&text).unwrap();
        let b = loaded.problem.domain_box.bounds();
        assert_eq!(b[0].0, mpi_core::ratio(-21, 20));
        assert_eq!(b[1].1, mpi_core::ratio(5, 2));
    }
}
