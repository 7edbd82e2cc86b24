//! Certified global minimization of polynomials over boxed basic
//! semialgebraic sets, by interval branch-and-bound with exact rational
//! feasibility verification, plus the auxiliary checks built on it
//! (nonemptiness, boundedness in simplex-normal directions, fixed points).
//!
//! Soundness contract: `lower` is always a true lower bound of the objective
//! over the feasible region intersected with the search box; `upper` is the
//! outward-rounded objective value at an exactly-verified feasible rational
//! witness. Sub-boxes are pruned only when a constraint's interval enclosure
//! is entirely negative (no feasible point) or the objective's enclosure
//! lower bound cannot beat the incumbent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::contract::contract_all;
use crate::error::{Error, Result};
use crate::interval::{BoxRegion, Interval, IntervalPoly};
use crate::poly::{PolyMap, Polynomial};
use crate::semialg::{ImplicitChain, SemialgebraicSet};

/// Branch-and-bound configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Absolute gap tolerance: converged means `upper - lower <= gap_tol`.
    pub gap_tol: f64,
    /// Boxes at or below this width are not subdivided further.
    pub min_width: f64,
    /// Maximum number of node expansions before giving up.
    pub max_nodes: u64,
    /// Forces single-ordered processing. The solver is sequential and
    /// deterministic either way; the flag also serializes the callers that
    /// would otherwise fan subproblems out across threads.
    pub deterministic: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            gap_tol: 1e-6,
            min_width: 1e-9,
            max_nodes: 1_000_000,
            deterministic: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0) {
            return Err(Error::InvalidConfig("gap tolerance must be positive".into()));
        }
        if !(self.min_width > 0.0) {
            return Err(Error::InvalidConfig("minimum box width must be positive".into()));
        }
        if self.max_nodes < 1 {
            return Err(Error::InvalidConfig("node budget must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// Gap closed below tolerance; witness is exactly verified feasible.
    Converged,
    /// Node or resolution budget exhausted first; bounds remain valid.
    BudgetExhausted,
    /// The feasible region within the box is empty, proved by interval
    /// exclusion of every leaf box.
    InfeasibleCertified,
}

/// Result of one certified minimization. `lower <= true minimum`;
/// `upper` is attained at `witness` when present. For a certified-empty
/// region both bounds are `+inf` (the minimum over the empty set).
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedBound {
    pub lower: f64,
    pub upper: f64,
    pub witness: Option<Vec<BigRational>>,
    pub status: BoundStatus,
    /// Nodes expanded; implementation detail recorded for reproducibility.
    pub nodes: u64,
}

/// Membership predicate handed to the solver: explicit constraint list or
/// implicit chain.
#[derive(Clone, Copy, Debug)]
pub enum SetRepr<'a> {
    Explicit(&'a SemialgebraicSet),
    Implicit(&'a ImplicitChain),
}

impl<'a> SetRepr<'a> {
    pub fn n(&self) -> usize {
        match self {
            SetRepr::Explicit(s) => s.n(),
            SetRepr::Implicit(c) => c.n(),
        }
    }

    /// Exact rational membership decision.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        match self {
            SetRepr::Explicit(s) => s.contains(x),
            SetRepr::Implicit(c) => c.contains(x),
        }
    }
}

/// Width at or below which the mean-value refinement is attempted on top of
/// the natural extension. On wide boxes the natural form already decides.
const MV_WIDTH: f64 = 1.0;

struct PreparedExplicit<'a> {
    set: &'a SemialgebraicSet,
    ivs: Vec<IntervalPoly>,
    grads: Vec<Vec<IntervalPoly>>,
}

struct PreparedImplicit<'a> {
    chain: &'a ImplicitChain,
    base: Vec<IntervalPoly>,
    dynamics: Vec<IntervalPoly>,
}

enum PreparedSet<'a> {
    Explicit(PreparedExplicit<'a>),
    Implicit(PreparedImplicit<'a>),
}

enum PreparedObjective<'a> {
    Poly {
        p: &'a Polynomial,
        iv: IntervalPoly,
        grads: Vec<IntervalPoly>,
    },
    /// `outer ∘ map^depth`, evaluated in stages without composition.
    Iterated {
        outer: &'a Polynomial,
        map: &'a PolyMap,
        outer_iv: IntervalPoly,
        map_iv: Vec<IntervalPoly>,
        depth: u32,
    },
}

struct Evaluator<'a> {
    set: PreparedSet<'a>,
    obj: PreparedObjective<'a>,
    /// Objective is syntactically one of the set's constraints, so its
    /// minimum over the feasible region is >= 0 by definition.
    floor_zero: bool,
    /// Iterated objective shares the implicit set's dynamics and sits one
    /// application deeper, so its staged enclosure can continue from the
    /// constraint pass instead of restarting.
    stage_continues: bool,
}

fn grad_ivs(p: &Polynomial) -> Vec<IntervalPoly> {
    (0..p.n())
        .map(|i| IntervalPoly::from(&p.partial_derivative(i)))
        .collect()
}

/// Mean-value refinement: `p(box) ⊆ p(mid) + Σ grad_i(box)·(box_i − mid_i)`.
fn mean_value(
    iv: &IntervalPoly,
    grads: &[IntervalPoly],
    box_iv: &[Interval],
    mid_iv: &[Interval],
) -> Interval {
    let mut acc = iv.eval(mid_iv);
    for (i, g) in grads.iter().enumerate() {
        let dev = box_iv[i].sub(mid_iv[i]);
        acc = acc.add(g.eval(box_iv).mul(dev));
    }
    acc
}

impl<'a> Evaluator<'a> {
    fn new(obj: MinObjective<'a>, set: SetRepr<'a>, floor_zero: bool) -> Self {
        let set = match set {
            SetRepr::Explicit(s) => PreparedSet::Explicit(PreparedExplicit {
                set: s,
                ivs: s.constraints().iter().map(IntervalPoly::from).collect(),
                grads: s.constraints().iter().map(grad_ivs).collect(),
            }),
            SetRepr::Implicit(c) => PreparedSet::Implicit(PreparedImplicit {
                chain: c,
                base: c.base().components().iter().map(IntervalPoly::from).collect(),
                dynamics: c
                    .dynamics()
                    .components()
                    .iter()
                    .map(IntervalPoly::from)
                    .collect(),
            }),
        };
        let obj = match obj {
            MinObjective::Poly(p) => PreparedObjective::Poly {
                p,
                iv: IntervalPoly::from(p),
                grads: grad_ivs(p),
            },
            MinObjective::Iterated { outer, map, depth } => PreparedObjective::Iterated {
                outer,
                map,
                outer_iv: IntervalPoly::from(outer),
                map_iv: map.components().iter().map(IntervalPoly::from).collect(),
                depth,
            },
        };
        let stage_continues = match (&obj, &set) {
            (
                PreparedObjective::Iterated { map, depth, .. },
                PreparedSet::Implicit(pi),
            ) => *depth == pi.chain.depth() + 1 && pi.chain.dynamics() == *map,
            _ => false,
        };
        Evaluator {
            set,
            obj,
            floor_zero,
            stage_continues,
        }
    }

    fn apply_map(map_iv: &[IntervalPoly], x: &[Interval]) -> Vec<Interval> {
        map_iv.iter().map(|c| c.eval(x)).collect()
    }

    /// Contracts the box against the stage-zero constraints; `None` when the
    /// box certainly holds no feasible point.
    fn contract_box(&self, bx: &BoxRegion) -> Option<BoxRegion> {
        let polys: &[IntervalPoly] = match &self.set {
            PreparedSet::Explicit(pe) => &pe.ivs,
            PreparedSet::Implicit(pi) => &pi.base,
        };
        let mut x = bx.to_intervals();
        contract_all(polys, &mut x, 3)?;
        bx.intersect_floats(&x)
    }

    /// Constraint pass over a box. Returns `None` when the box certainly
    /// holds no feasible point; for implicit sets, additionally returns the
    /// enclosure of `f^depth(box)` so a same-map objective can continue.
    fn constraints_pass(
        &self,
        box_iv: &[Interval],
        mid_iv: Option<&[Interval]>,
    ) -> Option<Option<Vec<Interval>>> {
        match &self.set {
            PreparedSet::Explicit(pe) => {
                let small = mid_iv.is_some();
                for (i, civ) in pe.ivs.iter().enumerate() {
                    let nat = civ.eval(box_iv);
                    if nat.hi < 0.0 {
                        return None;
                    }
                    if small && nat.lo < 0.0 {
                        let mv = mean_value(civ, &pe.grads[i], box_iv, mid_iv.unwrap());
                        if mv.hi < 0.0 {
                            return None;
                        }
                    }
                }
                Some(None)
            }
            PreparedSet::Implicit(pi) => {
                let mut cur = box_iv.to_vec();
                for j in 0..=pi.chain.depth() {
                    for b in &pi.base {
                        if b.eval(&cur).hi < 0.0 {
                            return None;
                        }
                    }
                    if j < pi.chain.depth() {
                        cur = Self::apply_map(&pi.dynamics, &cur);
                    }
                }
                Some(Some(cur))
            }
        }
    }

    fn objective_enclosure(
        &self,
        box_iv: &[Interval],
        mid_iv: Option<&[Interval]>,
        last_stage: Option<&[Interval]>,
    ) -> Interval {
        match &self.obj {
            PreparedObjective::Poly { iv, grads, .. } => {
                let nat = iv.eval(box_iv);
                match mid_iv {
                    Some(mid) => nat.intersect(mean_value(iv, grads, box_iv, mid)),
                    None => nat,
                }
            }
            PreparedObjective::Iterated {
                outer_iv,
                map_iv,
                depth,
                ..
            } => {
                // Continue from the set's staged enclosure when it used the
                // same dynamics and stopped one application short.
                if self.stage_continues {
                    if let Some(stage) = last_stage {
                        let cur = Self::apply_map(map_iv, stage);
                        return outer_iv.eval(&cur);
                    }
                }
                let mut cur = box_iv.to_vec();
                for _ in 0..*depth {
                    cur = Self::apply_map(map_iv, &cur);
                }
                outer_iv.eval(&cur)
            }
        }
    }

    /// Lower bound for the objective over `bx ∩ S`, or `None` when the box is
    /// certainly infeasible.
    fn node_lower(&self, bx: &BoxRegion) -> Option<f64> {
        let box_iv = bx.to_intervals();
        let small = bx.max_width_f64() <= MV_WIDTH;
        let mid_iv: Option<Vec<Interval>> = if small {
            Some(
                bx.midpoint()
                    .iter()
                    .map(Interval::from_rational)
                    .collect(),
            )
        } else {
            None
        };
        let last_stage = match self.constraints_pass(&box_iv, mid_iv.as_deref()) {
            None => return None,
            Some(stage) => stage,
        };
        let enc = self.objective_enclosure(&box_iv, mid_iv.as_deref(), last_stage.as_deref());
        let mut lo = if enc.lo.is_nan() { f64::NEG_INFINITY } else { enc.lo };
        if self.floor_zero {
            lo = lo.max(0.0);
        }
        Some(lo)
    }

    /// Cheap screen at a rational point: a lower bound of the objective value
    /// there, and whether the point is certainly infeasible.
    fn midpoint_probe(&self, mid: &[BigRational]) -> (f64, bool) {
        let mid_iv: Vec<Interval> = mid.iter().map(Interval::from_rational).collect();
        let infeasible = self.constraints_pass(&mid_iv, None).is_none();
        let enc = self.objective_enclosure(&mid_iv, None, None);
        let lo = if enc.lo.is_nan() { f64::NEG_INFINITY } else { enc.lo };
        (lo, infeasible)
    }

    /// Exact rational feasibility at a point — the only way a witness is
    /// ever accepted.
    fn exact_feasible(&self, x: &[BigRational]) -> Result<bool> {
        match &self.set {
            PreparedSet::Explicit(pe) => pe.set.contains(x),
            PreparedSet::Implicit(pi) => pi.chain.contains(x),
        }
    }

    fn exact_value(&self, x: &[BigRational]) -> Result<BigRational> {
        match &self.obj {
            PreparedObjective::Poly { p, .. } => p.evaluate(x),
            PreparedObjective::Iterated {
                outer, map, depth, ..
            } => {
                let mut cur = x.to_vec();
                for _ in 0..*depth {
                    cur = map.evaluate(&cur)?;
                }
                outer.evaluate(&cur)
            }
        }
    }
}

/// Objective forms accepted by the solver core.
pub enum MinObjective<'a> {
    Poly(&'a Polynomial),
    /// `outer ∘ map^depth` without performing the composition.
    Iterated {
        outer: &'a Polynomial,
        map: &'a PolyMap,
        depth: u32,
    },
}

struct Node {
    lower: f64,
    seq: u64,
    bx: BoxRegion,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.lower == other.lower && self.seq == other.seq
    }
}
impl Eq for Node {}

impl Ord for Node {
    // BinaryHeap is a max-heap; invert to pop the least (lower, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower
            .total_cmp(&self.lower)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn solve(
    obj: MinObjective<'_>,
    set: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<CertifiedBound> {
    cfg.validate()?;
    let n = set.n();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
            context: "solver search box",
        });
    }
    let floor_zero = objective_is_constraint(&obj, &set);
    if let MinObjective::Poly(p) = &obj {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n(),
                context: "solver objective",
            });
        }
    }
    let eval = Evaluator::new(obj, set, floor_zero);

    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut incumbent = f64::INFINITY;
    let mut witness: Option<Vec<BigRational>> = None;
    let mut settled = f64::INFINITY;
    let mut any_settled = false;
    let mut expanded: u64 = 0;

    let consider = |bx: BoxRegion,
                        parent_lower: f64,
                        heap: &mut BinaryHeap<Node>,
                        seq: &mut u64,
                        incumbent: &mut f64,
                        witness: &mut Option<Vec<BigRational>>|
     -> Result<()> {
        let Some(bx) = eval.contract_box(&bx) else {
            return Ok(()); // certainly infeasible
        };
        let Some(raw) = eval.node_lower(&bx) else {
            return Ok(()); // certainly infeasible
        };
        let lower = raw.max(parent_lower);
        // candidate witness at the exact rational midpoint
        let mid = bx.midpoint();
        let (screen, certainly_infeasible) = eval.midpoint_probe(&mid);
        if screen < *incumbent && !certainly_infeasible && eval.exact_feasible(&mid)? {
            let v = eval.exact_value(&mid)?;
            let vhi = Interval::from_rational(&v).hi;
            if vhi < *incumbent {
                *incumbent = vhi;
                *witness = Some(mid);
            }
        }
        if lower < *incumbent {
            heap.push(Node {
                lower,
                seq: *seq,
                bx,
            });
            *seq += 1;
        }
        Ok(())
    };

    consider(
        b.clone(),
        f64::NEG_INFINITY,
        &mut heap,
        &mut seq,
        &mut incumbent,
        &mut witness,
    )?;

    loop {
        let frontier = heap.peek().map_or(f64::INFINITY, |n| n.lower);
        let lower = frontier.min(settled).min(incumbent);
        if incumbent.is_finite() && incumbent - lower <= cfg.gap_tol {
            return Ok(CertifiedBound {
                lower,
                upper: incumbent,
                witness,
                status: BoundStatus::Converged,
                nodes: expanded,
            });
        }
        if heap.is_empty() {
            if incumbent.is_infinite() && !any_settled {
                return Ok(CertifiedBound {
                    lower: f64::INFINITY,
                    upper: f64::INFINITY,
                    witness: None,
                    status: BoundStatus::InfeasibleCertified,
                    nodes: expanded,
                });
            }
            return Ok(CertifiedBound {
                lower,
                upper: incumbent,
                witness,
                status: BoundStatus::BudgetExhausted,
                nodes: expanded,
            });
        }
        if expanded >= cfg.max_nodes {
            return Ok(CertifiedBound {
                lower,
                upper: incumbent,
                witness,
                status: BoundStatus::BudgetExhausted,
                nodes: expanded,
            });
        }
        let node = heap.pop().unwrap();
        expanded += 1;
        if node.lower >= incumbent {
            continue; // stale: incumbent improved after this node was pushed
        }
        if node.bx.max_width_f64() <= cfg.min_width {
            settled = settled.min(node.lower);
            any_settled = true;
            continue;
        }
        let (l, r) = node.bx.split(node.bx.widest_dim());
        consider(l, node.lower, &mut heap, &mut seq, &mut incumbent, &mut witness)?;
        consider(r, node.lower, &mut heap, &mut seq, &mut incumbent, &mut witness)?;
    }
}

fn objective_is_constraint(obj: &MinObjective<'_>, set: &SetRepr<'_>) -> bool {
    match (obj, set) {
        (MinObjective::Poly(p), SetRepr::Explicit(s)) => s.constraints().iter().any(|c| c == *p),
        (MinObjective::Poly(p), SetRepr::Implicit(c)) => {
            c.base().components().iter().any(|b| b == *p)
        }
        (
            MinObjective::Iterated { outer, map, depth },
            SetRepr::Implicit(c),
        ) => {
            *depth <= c.depth()
                && c.dynamics() == *map
                && c.base().components().iter().any(|b| b == *outer)
        }
        (MinObjective::Iterated { outer, depth, .. }, SetRepr::Explicit(s)) => {
            *depth == 0 && s.constraints().iter().any(|c| c == *outer)
        }
    }
}

/// Certified global minimum of `p` over `S ∩ b`.
pub fn certified_min(
    p: &Polynomial,
    s: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<CertifiedBound> {
    solve(MinObjective::Poly(p), s, b, cfg)
}

/// Certified global minimum of `outer ∘ map^depth` over `S ∩ b`, with the
/// composition evaluated in stages rather than expanded.
pub fn certified_min_iterated(
    outer: &Polynomial,
    map: &PolyMap,
    depth: u32,
    s: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<CertifiedBound> {
    solve(MinObjective::Iterated { outer, map, depth }, s, b, cfg)
}

/// Tri-state nonemptiness of `S ∩ b`.
#[derive(Clone, Debug, PartialEq)]
pub enum NonemptyReport {
    /// An exactly-verified feasible rational point.
    Nonempty { witness: Vec<BigRational> },
    /// Interval exclusion covered the whole box.
    EmptyCertified,
    /// Budget or resolution ran out first.
    Unknown,
}

pub fn check_nonempty(
    s: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<NonemptyReport> {
    let zero = Polynomial::zero(s.n());
    let bound = solve(MinObjective::Poly(&zero), s, b, cfg)?;
    Ok(match (bound.status, bound.witness) {
        (_, Some(w)) => NonemptyReport::Nonempty { witness: w },
        (BoundStatus::InfeasibleCertified, None) => NonemptyReport::EmptyCertified,
        (_, None) => NonemptyReport::Unknown,
    })
}

/// Certified directional maximum for one simplex-normal direction.
#[derive(Clone, Debug)]
pub struct DirectionBound {
    pub direction: Vec<BigRational>,
    /// Value attained at the witness: a certified lower bound of the max.
    pub attained: f64,
    /// Certified upper bound of the max.
    pub upper: f64,
    pub witness: Option<Vec<BigRational>>,
    pub status: BoundStatus,
    /// Set when the maximum cannot be strictly separated from the box's own
    /// maximum in this direction; boundedness is then inconclusive
    /// relative to `b`.
    pub touches_box_boundary: bool,
}

#[derive(Clone, Debug)]
pub enum BoundednessReport {
    EmptyCertified,
    Directions(Vec<DirectionBound>),
}

/// The n+1 unit outward normals of the standard unit simplex: the negative
/// coordinate directions plus the all-ones direction scaled by a rational
/// approximation of 1/sqrt(n).
fn simplex_directions(n: usize) -> Vec<Vec<BigRational>> {
    let mut dirs = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut d = vec![BigRational::zero(); n];
        d[j] = -BigRational::from_integer(1.into());
        dirs.push(d);
    }
    let inv = BigRational::from_float(1.0 / (n as f64).sqrt())
        .expect("finite for n >= 1");
    dirs.push(vec![inv; n]);
    dirs
}

/// Exact maximum of the linear functional `c^T x` over the box itself.
fn box_linear_max(c: &[BigRational], b: &BoxRegion) -> BigRational {
    c.iter()
        .zip(b.bounds())
        .map(|(ci, (lo, hi))| {
            if *ci >= BigRational::zero() {
                ci * hi
            } else {
                ci * lo
            }
        })
        .sum()
}

/// Boundedness probe: maximizes `c_j^T x` over `S ∩ b` for each of the n+1
/// simplex-normal directions.
pub fn check_bounded(
    s: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<BoundednessReport> {
    if let NonemptyReport::EmptyCertified = check_nonempty(s, b, cfg)? {
        return Ok(BoundednessReport::EmptyCertified);
    }
    let n = s.n();
    let mut out = Vec::new();
    for c in simplex_directions(n) {
        // max c^T x = -min (-c)^T x
        let neg = Polynomial::from_terms(
            n,
            c.iter()
                .enumerate()
                .map(|(i, ci)| (crate::poly::Monomial::var(n, i), -ci.clone())),
        )?;
        let res = solve(MinObjective::Poly(&neg), s, b, cfg)?;
        let upper = -res.lower;
        let attained = -res.upper;
        let touches = match BigRational::from_float(upper) {
            Some(u) => u >= box_linear_max(&c, b),
            None => true, // unbounded estimate: cannot separate
        };
        out.push(DirectionBound {
            direction: c,
            attained,
            upper,
            witness: res.witness,
            status: res.status,
            touches_box_boundary: touches,
        });
    }
    Ok(BoundednessReport::Directions(out))
}

/// Builds `‖f(x) − x‖²` and minimizes it over `S ∩ b`. A fixed point exists
/// in `S ∩ b` iff the certified minimum is zero; `upper == 0` exactly at a
/// rational witness is a constructive certificate.
pub fn find_fixed_point(
    f: &PolyMap,
    s: SetRepr<'_>,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<CertifiedBound> {
    let n = s.n();
    if f.n_in() != n || f.n_out() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.n_in(),
            context: "fixed-point dynamics must be square",
        });
    }
    let mut residual = Polynomial::zero(n);
    for (i, fi) in f.components().iter().enumerate() {
        let diff = fi.sub(&Polynomial::var(n, i));
        residual = residual.add(&diff.mul(&diff));
    }
    solve(MinObjective::Poly(&residual), s, b, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str, n: usize) -> Polynomial {
        crate::parse::parse_polynomial(s, n).unwrap()
    }

    fn inf_ball() -> SemialgebraicSet {
        SemialgebraicSet::new(vec![
            p("1 - x1", 2),
            p("1 - x2", 2),
            p("1 + x1", 2),
            p("1 + x2", 2),
        ])
        .unwrap()
    }

    fn one_ball() -> SemialgebraicSet {
        SemialgebraicSet::new(vec![
            p("1 - x1 - x2", 2),
            p("1 + x1 - x2", 2),
            p("1 + x1 + x2", 2),
            p("1 - x1 + x2", 2),
        ])
        .unwrap()
    }

    fn sec5_dynamics() -> PolyMap {
        PolyMap::new(vec![
            p("1/2*x1 - x1^2 - x2", 2),
            p("-x1^4 + x1^3 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 - x2^2 + 1/2*x2", 2),
        ])
        .unwrap()
    }

    #[test]
    fn min_of_norm_over_inf_ball_is_zero_at_origin() {
        let obj = p("x1^2 + x2^2", 2);
        let s = inf_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let cfg = SolverConfig::default();
        let r = certified_min(&obj, SetRepr::Explicit(&s), &b, &cfg).unwrap();
        assert_eq!(r.status, BoundStatus::Converged);
        assert!(r.lower <= 0.0 && 0.0 <= r.upper);
        assert!(r.upper - r.lower <= cfg.gap_tol);
        let w = r.witness.unwrap();
        let wx = Interval::from_rational(&w[0]).hi.abs();
        let wy = Interval::from_rational(&w[1]).hi.abs();
        assert!(wx < 1e-3 && wy < 1e-3, "witness should be near the origin");
    }

    #[test]
    fn min_attained_on_a_face_converges_exactly() {
        // 1 - (x1 + x2) over the 1-norm ball: minimum 0 on the face
        // x1 + x2 = 1. The objective is itself a constraint, so the
        // feasible-region floor certifies the lower bound.
        let obj = p("1 - x1 - x2", 2);
        let s = one_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let cfg = SolverConfig::default();
        let r = certified_min(&obj, SetRepr::Explicit(&s), &b, &cfg).unwrap();
        assert_eq!(r.status, BoundStatus::Converged);
        assert!(r.lower >= -1e-12 && r.lower <= r.upper);
        assert_eq!(r.upper, 0.0, "a rational point on the face attains 0");
    }

    #[test]
    fn constant_objective() {
        let obj = Polynomial::constant(2, rat(-3));
        let s = inf_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let r = certified_min(&obj, SetRepr::Explicit(&s), &b, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, BoundStatus::Converged);
        assert!(r.lower <= -3.0 && r.upper >= -3.0);
        assert!((r.upper - r.lower).abs() <= 1e-6);
    }

    #[test]
    fn nonempty_tri_state() {
        let cfg = SolverConfig::default();
        let disc = SemialgebraicSet::new(vec![p("1 - x1^2 - x2^2", 2)]).unwrap();
        let b = BoxRegion::cube(2, -2, 2);
        match check_nonempty(SetRepr::Explicit(&disc), &b, &cfg).unwrap() {
            NonemptyReport::Nonempty { witness } => {
                assert!(disc.contains(&witness).unwrap());
            }
            other => panic!("expected nonempty, got {other:?}"),
        }

        let empty = SemialgebraicSet::new(vec![p("x1 - 1", 1), p("-x1 - 1", 1)]).unwrap();
        let b1 = BoxRegion::new(vec![(rat(-2), rat(2))]).unwrap();
        assert_eq!(
            check_nonempty(SetRepr::Explicit(&empty), &b1, &cfg).unwrap(),
            NonemptyReport::EmptyCertified
        );
    }

    #[test]
    fn bounded_unit_disc_separated_from_box() {
        let disc = SemialgebraicSet::new(vec![p("1 - x1^2 - x2^2", 2)]).unwrap();
        let b = BoxRegion::cube(2, -2, 2);
        let rep = check_bounded(SetRepr::Explicit(&disc), &b, &SolverConfig::default()).unwrap();
        match rep {
            BoundednessReport::Directions(dirs) => {
                assert_eq!(dirs.len(), 3);
                for d in &dirs {
                    assert!(d.upper <= 1.0 + 1e-6, "support of unit disc is 1");
                    assert!(!d.touches_box_boundary);
                }
            }
            other => panic!("unexpected report {other:?}"),
        }
    }

    #[test]
    fn bounded_when_set_is_the_box_touches_everywhere() {
        let sq = SemialgebraicSet::new(vec![
            p("2 - x1", 2),
            p("2 + x1", 2),
            p("2 - x2", 2),
            p("2 + x2", 2),
        ])
        .unwrap();
        let b = BoxRegion::cube(2, -2, 2);
        let rep = check_bounded(SetRepr::Explicit(&sq), &b, &SolverConfig::default()).unwrap();
        match rep {
            BoundednessReport::Directions(dirs) => {
                assert!(dirs.iter().all(|d| d.touches_box_boundary));
            }
            other => panic!("unexpected report {other:?}"),
        }
    }

    #[test]
    fn bounded_empty_reports_empty() {
        let empty = SemialgebraicSet::new(vec![p("x1 - 1", 1), p("-x1 - 1", 1)]).unwrap();
        let b = BoxRegion::new(vec![(rat(-2), rat(2))]).unwrap();
        assert!(matches!(
            check_bounded(SetRepr::Explicit(&empty), &b, &SolverConfig::default()).unwrap(),
            BoundednessReport::EmptyCertified
        ));
    }

    #[test]
    fn fixed_point_of_example_dynamics_at_origin() {
        let f = sec5_dynamics();
        let s = inf_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let r = find_fixed_point(&f, SetRepr::Explicit(&s), &b, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, BoundStatus::Converged);
        assert_eq!(r.upper, 0.0);
        let w = r.witness.unwrap();
        assert_eq!(w, vec![rat(0), rat(0)]);
    }

    #[test]
    fn no_fixed_point_for_translation() {
        let f = PolyMap::new(vec![p("x1 + 1", 1)]).unwrap();
        let s = SemialgebraicSet::new(vec![p("4 - x1^2", 1)]).unwrap();
        let b = BoxRegion::new(vec![(rat(-2), rat(2))]).unwrap();
        let r = find_fixed_point(&f, SetRepr::Explicit(&s), &b, &SolverConfig::default()).unwrap();
        assert!(r.lower >= 1.0 - 1e-6);
    }

    #[test]
    fn identity_has_zero_residual_everywhere() {
        let f = PolyMap::identity(2);
        let s = inf_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let r = find_fixed_point(&f, SetRepr::Explicit(&s), &b, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, BoundStatus::Converged);
        assert_eq!(r.upper, 0.0);
        assert!(s.contains(&r.witness.unwrap()).unwrap());
    }

    #[test]
    fn deterministic_repeat_runs_bit_identical() {
        let obj = p("x1^4 - x1^2*x2 + x2^2 - 1/3*x1", 2);
        let s = one_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let cfg = SolverConfig::default();
        let a = certified_min(&obj, SetRepr::Explicit(&s), &b, &cfg).unwrap();
        let b2 = certified_min(&obj, SetRepr::Explicit(&s), &b, &cfg).unwrap();
        assert_eq!(a, b2);
    }

    #[test]
    fn monotone_refinement_under_tighter_gap() {
        let obj = p("x1^2 - x2 + 1/7", 2);
        let s = one_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let loose = SolverConfig {
            gap_tol: 1e-2,
            ..SolverConfig::default()
        };
        let tight = SolverConfig {
            gap_tol: 1e-8,
            ..SolverConfig::default()
        };
        let rl = certified_min(&obj, SetRepr::Explicit(&s), &b, &loose).unwrap();
        let rt = certified_min(&obj, SetRepr::Explicit(&s), &b, &tight).unwrap();
        assert!(rt.lower >= rl.lower);
        assert!(rt.upper <= rl.upper);
    }

    #[test]
    fn budget_exhaustion_is_reported_not_wrong() {
        let obj = p("x1^2 + x2^2", 2);
        let s = inf_ball();
        let b = BoxRegion::cube(2, -2, 2);
        let cfg = SolverConfig {
            max_nodes: 3,
            ..SolverConfig::default()
        };
        let r = certified_min(&obj, SetRepr::Explicit(&s), &b, &cfg).unwrap();
        if r.status == BoundStatus::BudgetExhausted {
            assert!(r.lower <= 0.0); // still a valid lower bound
        }
    }
}
