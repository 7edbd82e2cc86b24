//! The set recursion with certified termination: starting from the
//! constraint set, repeatedly apply the restricted preimage update and stop
//! as soon as every component of the next partial update map is certifiably
//! nonnegative over the current iterate. The converged iterate is the
//! maximal positively invariant set.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::globopt::{
    certified_min, certified_min_iterated, check_nonempty, BoundStatus, CertifiedBound,
    NonemptyReport, SetRepr, SolverConfig,
};
use crate::interval::BoxRegion;
use crate::poly::PolyMap;
use crate::semialg::{reduce_redundancy, ImplicitChain, SemialgebraicSet};

/// Iterate representation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Store fully composed constraint polynomials.
    Explicit,
    /// Store (constraint map, dynamics, depth) and never compose.
    Implicit,
}

/// A fully specified instance: dynamics, constraint map, search box, and
/// algorithm options.
#[derive(Clone, Debug)]
pub struct Problem {
    pub f: PolyMap,
    pub phi0: PolyMap,
    pub domain_box: BoxRegion,
    pub epsilon: f64,
    pub k_max: u32,
    pub mode: Mode,
    pub reduction: bool,
    pub solver: SolverConfig,
}

impl Problem {
    pub fn n(&self) -> usize {
        self.f.n_in()
    }

    /// Number of constraint-map components, the `m` of the recursion.
    pub fn m(&self) -> usize {
        self.phi0.n_out()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.f.n_in();
        if self.f.n_out() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.f.n_out(),
                context: "dynamics must map R^n to R^n",
            });
        }
        if self.phi0.n_in() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.phi0.n_in(),
                context: "constraint map ambient dimension",
            });
        }
        if self.domain_box.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.domain_box.dim(),
                context: "domain box dimension",
            });
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::InvalidConfig("epsilon must be nonnegative".into()));
        }
        self.solver.validate()
    }
}

/// Either representation of one iterate.
#[derive(Clone, Debug, PartialEq)]
pub enum Iterate {
    Explicit(SemialgebraicSet),
    Implicit(ImplicitChain),
}

impl Iterate {
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        match self {
            Iterate::Explicit(s) => s.contains(x),
            Iterate::Implicit(c) => c.contains(x),
        }
    }

    pub fn constraint_count(&self) -> usize {
        match self {
            Iterate::Explicit(s) => s.constraint_count(),
            Iterate::Implicit(c) => c.constraint_count(),
        }
    }

    pub fn as_set_repr(&self) -> SetRepr<'_> {
        match self {
            Iterate::Explicit(s) => SetRepr::Explicit(s),
            Iterate::Implicit(c) => SetRepr::Implicit(c),
        }
    }
}

/// Emptiness verdict recorded per iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Nonempty,
    EmptyCertified,
    Unknown,
}

/// One iteration of the recursion: the m certified bounds on the next
/// partial update map's components over the current iterate, their minimum
/// delta, and bookkeeping.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub k: u32,
    pub bounds: Vec<CertifiedBound>,
    pub delta: f64,
    pub constraint_count: usize,
    pub emptiness: Emptiness,
    pub wall_time: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpiStatus {
    Converged,
    Unsuccessful,
    Empty,
}

#[derive(Clone, Debug)]
pub struct MpiResult {
    pub status: MpiStatus,
    pub k_final: u32,
    pub omega: Iterate,
    pub trace: Vec<IterationRecord>,
    /// Every iterate X0..X_{k_final}, as stored (after reduction when it is
    /// enabled). The last entry equals `omega`.
    pub iterates: Vec<Iterate>,
}

/// Engine state for one run: the iterate, the explicit k-th power of the
/// dynamics (explicit mode only), and the iteration index.
struct EngineState {
    iterate: Iterate,
    /// f^k, maintained incrementally; None in implicit mode.
    fk: Option<PolyMap>,
    k: u32,
}

/// Advances `Xk` to `Xk+1`. In explicit mode this appends the freshly
/// composed partial update map (equivalent to the preimage update, which
/// tests assert); in implicit mode it deepens the chain. Returns the next
/// state together with the explicit partial map when one was built.
pub fn step(
    iterate: &Iterate,
    fk: Option<&PolyMap>,
    problem: &Problem,
) -> Result<(Iterate, Option<PolyMap>, Option<PolyMap>)> {
    match iterate {
        Iterate::Explicit(s) => {
            let fk = fk.expect("explicit mode carries f^k");
            let fk1 = problem.f.compose(fk)?;
            let partial = phi_of(&problem.phi0, &fk1)?;
            let mut constraints = s.constraints().to_vec();
            constraints.extend(partial.components().iter().cloned());
            Ok((
                Iterate::Explicit(SemialgebraicSet::new(constraints)?),
                Some(fk1),
                Some(partial),
            ))
        }
        Iterate::Implicit(c) => Ok((Iterate::Implicit(c.deepen()), None, None)),
    }
}

/// phi0 ∘ g, componentwise.
fn phi_of(phi0: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    PolyMap::new(
        phi0.components()
            .iter()
            .map(|c| c.compose(g))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Runs the m certified minimizations of the termination test: each
/// component of the next partial update map over the current iterate within
/// the domain box. Passes iff delta >= epsilon with every component
/// conclusive; a budget-exhausted component makes the test fail so the
/// iteration continues.
pub fn termination_test(
    iterate: &Iterate,
    partial_next: Option<&PolyMap>,
    problem: &Problem,
    next_depth: u32,
) -> Result<(Vec<CertifiedBound>, f64)> {
    let m = problem.m();
    let solve_one = |i: usize| -> Result<CertifiedBound> {
        match (iterate, partial_next) {
            (Iterate::Explicit(s), Some(partial)) => certified_min(
                &partial.components()[i],
                SetRepr::Explicit(s),
                &problem.domain_box,
                &problem.solver,
            ),
            (Iterate::Implicit(c), _) => certified_min_iterated(
                &problem.phi0.components()[i],
                &problem.f,
                next_depth,
                SetRepr::Implicit(c),
                &problem.domain_box,
                &problem.solver,
            ),
            (Iterate::Explicit(_), None) => Err(Error::InvalidConfig(
                "explicit termination test needs the composed partial map".into(),
            )),
        }
    };
    let bounds: Vec<CertifiedBound> = if problem.solver.deterministic {
        (0..m).map(solve_one).collect::<Result<Vec<_>>>()?
    } else {
        // The m subproblems are independent and each is internally
        // deterministic, so fanning out changes nothing but wall time.
        (0..m)
            .into_par_iter()
            .map(solve_one)
            .collect::<Result<Vec<_>>>()?
    };
    let delta = bounds.iter().map(|b| b.lower).fold(f64::INFINITY, f64::min);
    Ok((bounds, delta))
}

fn test_passes(bounds: &[CertifiedBound], delta: f64, epsilon: f64) -> bool {
    delta >= epsilon
        && bounds
            .iter()
            .all(|b| b.status != BoundStatus::BudgetExhausted)
}

/// The full recursion. Initializes X0 from the constraint map, checks
/// emptiness once per iteration, runs the termination test, and either
/// stops (converged / empty / out of iterations) or steps to the next
/// iterate, optionally reducing redundancy.
pub fn compute_mpi(problem: &Problem) -> Result<MpiResult> {
    problem.validate()?;
    let n = problem.n();
    let phi0_set = SemialgebraicSet::from_map(&problem.phi0);
    let mut state = match problem.mode {
        Mode::Explicit => EngineState {
            iterate: Iterate::Explicit(phi0_set.clone()),
            fk: Some(PolyMap::identity(n)),
            k: 0,
        },
        Mode::Implicit => EngineState {
            iterate: Iterate::Implicit(ImplicitChain::new(
                problem.phi0.clone(),
                problem.f.clone(),
                0,
            )?),
            fk: None,
            k: 0,
        },
    };
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut iterates: Vec<Iterate> = vec![state.iterate.clone()];
    let mut delta = -1.0f64;

    while delta < problem.epsilon && state.k < problem.k_max {
        let started = Instant::now();
        let emptiness = match check_nonempty(
            state.iterate.as_set_repr(),
            &problem.domain_box,
            &problem.solver,
        )? {
            NonemptyReport::Nonempty { .. } => Emptiness::Nonempty,
            NonemptyReport::EmptyCertified => Emptiness::EmptyCertified,
            NonemptyReport::Unknown => Emptiness::Unknown,
        };
        if emptiness == Emptiness::EmptyCertified {
            trace.push(IterationRecord {
                k: state.k,
                bounds: Vec::new(),
                delta,
                constraint_count: state.iterate.constraint_count(),
                emptiness,
                wall_time: started.elapsed(),
            });
            return Ok(MpiResult {
                status: MpiStatus::Empty,
                k_final: state.k,
                omega: state.iterate,
                trace,
                iterates,
            });
        }

        // Build the next partial update map (explicit mode composes; the
        // implicit test works from the stages directly).
        let (next_iterate, next_fk, partial) = step(&state.iterate, state.fk.as_ref(), problem)?;
        let (bounds, d) =
            termination_test(&state.iterate, partial.as_ref(), problem, state.k + 1)?;
        delta = d;
        trace.push(IterationRecord {
            k: state.k,
            bounds: bounds.clone(),
            delta,
            constraint_count: state.iterate.constraint_count(),
            emptiness,
            wall_time: started.elapsed(),
        });

        if test_passes(&bounds, delta, problem.epsilon) {
            return Ok(MpiResult {
                status: MpiStatus::Converged,
                k_final: state.k,
                omega: state.iterate,
                trace,
                iterates,
            });
        }
        delta = -1.0; // inconclusive or failed: keep iterating

        let mut iterate = next_iterate;
        if problem.reduction {
            if let Iterate::Explicit(s) = &iterate {
                iterate = Iterate::Explicit(reduce_redundancy(
                    s,
                    &problem.domain_box,
                    &problem.solver,
                )?);
            }
        }
        iterates.push(iterate.clone());
        state = EngineState {
            iterate,
            fk: next_fk,
            k: state.k + 1,
        };
    }

    Ok(MpiResult {
        status: MpiStatus::Unsuccessful,
        k_final: state.k,
        omega: state.iterate,
        trace,
        iterates,
    })
}

/// Outcome of the post-hoc invariance audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvarianceOutcome {
    /// Every constraint of S composed with f, and every constraint of the
    /// state constraint set, is certifiably nonnegative over S.
    Invariant,
    /// Some check has a certified negative value at a feasible witness.
    NotInvariant,
    /// Budget exhausted before a verdict.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub outcome: InvarianceOutcome,
    /// Bounds on min over S of each constraint of S composed with f.
    pub image_checks: Vec<CertifiedBound>,
    /// Bounds on min over S of each component of the state constraint map.
    pub containment_checks: Vec<CertifiedBound>,
}

/// Independently certifies positive invariance of a candidate set: f maps S
/// into S (every constraint of S stays nonnegative along the image) and S
/// lies inside the state constraint set.
pub fn verify_invariance(
    s: &Iterate,
    f: &PolyMap,
    phi0: &PolyMap,
    domain_box: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<InvarianceReport> {
    let repr = s.as_set_repr();
    let mut image_checks = Vec::new();
    match s {
        Iterate::Explicit(set) => {
            for c in set.constraints() {
                image_checks.push(certified_min_iterated(c, f, 1, repr, domain_box, cfg)?);
            }
        }
        Iterate::Implicit(chain) => {
            // f(x) in chain  <=>  base(f^{j+1}(x)) >= 0 for j = 0..=depth
            for j in 0..=chain.depth() {
                for c in chain.base().components() {
                    image_checks.push(certified_min_iterated(
                        c,
                        f,
                        j + 1,
                        repr,
                        domain_box,
                        cfg,
                    )?);
                }
            }
        }
    }
    let mut containment_checks = Vec::new();
    for c in phi0.components() {
        containment_checks.push(certified_min(c, repr, domain_box, cfg)?);
    }

    let all = image_checks.iter().chain(&containment_checks);
    let mut outcome = InvarianceOutcome::Invariant;
    for b in all {
        if b.upper < 0.0 {
            outcome = InvarianceOutcome::NotInvariant;
            break;
        }
        if b.lower < 0.0 {
            outcome = InvarianceOutcome::Inconclusive;
        }
    }
    Ok(InvarianceReport {
        outcome,
        image_checks,
        containment_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Polynomial};

    fn p(s: &str, n: usize) -> Polynomial {
        crate::parse::parse_polynomial(s, n).unwrap()
    }

    fn sec5_dynamics() -> PolyMap {
        PolyMap::new(vec![
            p("1/2*x1 - x1^2 - x2", 2),
            p("-x1^4 + x1^3 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 - x2^2 + 1/2*x2", 2),
        ])
        .unwrap()
    }

    fn inf_ball_map() -> PolyMap {
        PolyMap::new(vec![
            p("1 - x1", 2),
            p("1 - x2", 2),
            p("1 + x1", 2),
            p("1 + x2", 2),
        ])
        .unwrap()
    }

    fn problem(f: PolyMap, phi0: PolyMap, mode: Mode) -> Problem {
        Problem {
            f,
            phi0,
            domain_box: BoxRegion::cube(2, -2, 2),
            epsilon: 0.0,
            k_max: 10,
            mode,
            reduction: false,
            solver: SolverConfig::default(),
        }
    }

    #[test]
    fn identity_dynamics_converges_immediately() {
        let pr = problem(PolyMap::identity(2), inf_ball_map(), Mode::Explicit);
        let res = compute_mpi(&pr).unwrap();
        assert_eq!(res.status, MpiStatus::Converged);
        assert_eq!(res.k_final, 0);
        assert_eq!(res.omega.constraint_count(), 4);
        assert_eq!(res.trace.len(), 1);
        assert!(res.trace[0].delta >= 0.0);
    }

    #[test]
    fn step_counts_and_fixed_point_membership() {
        let pr = problem(sec5_dynamics(), inf_ball_map(), Mode::Explicit);
        let x0 = Iterate::Explicit(SemialgebraicSet::from_map(&pr.phi0));
        let id = PolyMap::identity(2);
        let (x1, _, partial) = step(&x0, Some(&id), &pr).unwrap();
        assert_eq!(x1.constraint_count(), 8);
        assert_eq!(partial.unwrap().n_out(), 4);
        // the origin is a fixed point and survives every step
        assert!(x1.contains(&[rat(0), rat(0)]).unwrap());
        let (x2, _, _) = step(
            &x1,
            Some(&pr.f.iterate(1).unwrap()),
            &pr,
        )
        .unwrap();
        assert_eq!(x2.constraint_count(), 12);
        assert!(x2.contains(&[rat(0), rat(0)]).unwrap());
    }

    #[test]
    fn step_matches_preimage_update_canonically() {
        // the appended partial map route and the preimage-update route must
        // produce identical canonical constraint lists
        let pr = problem(sec5_dynamics(), inf_ball_map(), Mode::Explicit);
        let x0 = SemialgebraicSet::from_map(&pr.phi0);
        let id = PolyMap::identity(2);
        let (x1, fk1, _) = step(&Iterate::Explicit(x0.clone()), Some(&id), &pr).unwrap();
        let via_preimage = crate::semialg::preimage_update(&x0, &pr.f, &x0).unwrap();
        match x1 {
            Iterate::Explicit(s) => assert_eq!(s, via_preimage),
            _ => unreachable!(),
        }
        let _ = fk1;
    }

    #[test]
    fn empty_constraint_set_detected() {
        let contradictory = PolyMap::new(vec![p("x1 - 1", 2), p("-x1 - 1", 2)]).unwrap();
        let pr = problem(sec5_dynamics(), contradictory, Mode::Explicit);
        let res = compute_mpi(&pr).unwrap();
        assert_eq!(res.status, MpiStatus::Empty);
        assert_eq!(res.k_final, 0);
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.trace[0].emptiness, Emptiness::EmptyCertified);
    }

    #[test]
    fn kmax_zero_returns_unsuccessful_without_testing() {
        let mut pr = problem(sec5_dynamics(), inf_ball_map(), Mode::Explicit);
        pr.k_max = 0;
        let res = compute_mpi(&pr).unwrap();
        assert_eq!(res.status, MpiStatus::Unsuccessful);
        assert!(res.trace.is_empty());
    }

    #[test]
    fn trace_delta_is_min_of_bounds() {
        let pr = problem(sec5_dynamics(), inf_ball_map(), Mode::Explicit);
        let res = compute_mpi(&pr).unwrap();
        for rec in &res.trace {
            let min = rec
                .bounds
                .iter()
                .map(|b| b.lower)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(rec.delta, min);
        }
    }
}
