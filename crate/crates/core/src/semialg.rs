//! Basic semialgebraic sets, the restricted preimage update, implicit
//! iterate representations, and redundancy reduction.
//!
//! A set is `{x : phi(x) >= 0 componentwise}` with closed inequalities only.
//! The preimage update stacks the restricting set's constraints first and
//! the composed constraints second, so iterating it from `X0` reproduces the
//! partial-update stacking `(phi0; phi0∘f; ...; phi0∘f^k)` order exactly.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::globopt::{certified_min, BoundStatus, SetRepr, SolverConfig};
use crate::interval::BoxRegion;
use crate::poly::{PolyMap, Polynomial};

/// Explicit representation: `{x : all constraints >= 0 at x}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemialgebraicSet {
    n: usize,
    constraints: Vec<Polynomial>,
}

impl SemialgebraicSet {
    pub fn new(constraints: Vec<Polynomial>) -> Result<Self> {
        let n = match constraints.first() {
            Some(p) => p.n(),
            None => {
                return Err(Error::InvalidConfig(
                    "semialgebraic set needs at least one constraint".into(),
                ))
            }
        };
        for p in &constraints {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n(),
                    context: "constraint ambient dimension",
                });
            }
        }
        Ok(SemialgebraicSet { n, constraints })
    }

    /// The set cut out by the components of a constraint map.
    pub fn from_map(phi: &PolyMap) -> Self {
        SemialgebraicSet {
            n: phi.n_in(),
            constraints: phi.components().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Polynomial] {
        &self.constraints
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// Exact membership: every constraint nonnegative at `x`.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
                context: "membership point",
            });
        }
        for c in &self.constraints {
            if c.evaluate(x)? < BigRational::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Restricted preimage: `{x in X0 : f(x) in S}`, returned explicitly as the
/// stacked constraint list `(X0's constraints; S's constraints ∘ f)`.
pub fn preimage_update(
    s: &SemialgebraicSet,
    f: &PolyMap,
    x0: &SemialgebraicSet,
) -> Result<SemialgebraicSet> {
    let n = x0.n();
    if f.n_in() != n || f.n_out() != n || s.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if f.n_in() != n { f.n_in() } else { s.n() },
            context: "preimage update operands",
        });
    }
    let mut constraints = x0.constraints.clone();
    for c in &s.constraints {
        constraints.push(c.compose(f)?);
    }
    SemialgebraicSet::new(constraints)
}

/// Implicit representation of the k-th iterate: membership holds iff
/// `base(f^j(x)) >= 0` componentwise for every `j = 0..=depth`, decided by
/// iterated exact evaluation of `f` (no polynomial composition).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImplicitChain {
    base: PolyMap,
    dynamics: PolyMap,
    depth: u32,
}

impl ImplicitChain {
    pub fn new(base: PolyMap, dynamics: PolyMap, depth: u32) -> Result<Self> {
        let n = base.n_in();
        if dynamics.n_in() != n || dynamics.n_out() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: dynamics.n_in(),
                context: "chain dynamics must be square on the base's space",
            });
        }
        Ok(ImplicitChain {
            base,
            dynamics,
            depth,
        })
    }

    pub fn base(&self) -> &PolyMap {
        &self.base
    }

    pub fn dynamics(&self) -> &PolyMap {
        &self.dynamics
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn n(&self) -> usize {
        self.base.n_in()
    }

    /// Number of scalar constraints the chain represents: m·(depth+1).
    pub fn constraint_count(&self) -> usize {
        self.base.n_out() * (self.depth as usize + 1)
    }

    /// The chain one step deeper (the implicit form of the preimage update).
    pub fn deepen(&self) -> ImplicitChain {
        ImplicitChain {
            base: self.base.clone(),
            dynamics: self.dynamics.clone(),
            depth: self.depth + 1,
        }
    }

    /// Exact membership by iterated evaluation of the dynamics.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
                context: "membership point",
            });
        }
        let mut cur = x.to_vec();
        for j in 0..=self.depth {
            for c in self.base.components() {
                if c.evaluate(&cur)? < BigRational::zero() {
                    return Ok(false);
                }
            }
            if j < self.depth {
                cur = self.dynamics.evaluate(&cur)?;
            }
        }
        Ok(true)
    }
}

/// Redundancy reduction: a single pass in list order over the constraints.
/// Constraint i is dropped only when the certified lower bound of
/// `phi_i` over the set cut out by the *remaining* constraints (within `b`)
/// is >= 0. Solver nonconvergence retains the constraint; the final
/// remaining constraint is never dropped.
pub fn reduce_redundancy(
    s: &SemialgebraicSet,
    b: &BoxRegion,
    cfg: &SolverConfig,
) -> Result<SemialgebraicSet> {
    if b.dim() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: b.dim(),
            context: "reduction box",
        });
    }
    let mut kept: Vec<Polynomial> = s.constraints.clone();
    let mut i = 0;
    while i < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let candidate = kept[i].clone();
        let others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| c.clone())
            .collect();
        let rest = SemialgebraicSet::new(others)?;
        let bound = certified_min(&candidate, SetRepr::Explicit(&rest), b, cfg)?;
        let redundant = match bound.status {
            // min over an empty region is vacuously nonnegative
            BoundStatus::InfeasibleCertified => true,
            BoundStatus::Converged | BoundStatus::BudgetExhausted => bound.lower >= 0.0,
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    SemialgebraicSet::new(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn p(s: &str, n: usize) -> Polynomial {
        crate::parse::parse_polynomial(s, n).unwrap()
    }

    fn unit_disc() -> SemialgebraicSet {
        SemialgebraicSet::new(vec![p("1 - x1^2 - x2^2", 2)]).unwrap()
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

    #[test]
    fn contains_closed_boundary() {
        let disc = unit_disc();
        assert!(disc.contains(&[rat(0), rat(0)]).unwrap());
        assert!(!disc.contains(&[rat(1), rat(1)]).unwrap());
        // boundary included (closed set)
        let ball = inf_ball();
        assert!(ball.contains(&[rat(1), rat(1)]).unwrap());
        assert!(!ball.contains(&[ratio(101, 100), rat(0)]).unwrap());
    }

    #[test]
    fn preimage_update_stacks_and_restricts() {
        let ball = inf_ball();
        let f = PolyMap::new(vec![
            p("1/2*x1 - x1^2 - x2", 2),
            p("-x1^4 + x1^3 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 - x2^2 + 1/2*x2", 2),
        ])
        .unwrap();
        let x1 = preimage_update(&ball, &f, &ball).unwrap();
        assert_eq!(x1.constraint_count(), 8);
        // prefix property: X0's constraints come first, verbatim
        assert_eq!(&x1.constraints()[..4], ball.constraints());
        // (1,1) maps to (-3/2, -5/4) outside the ball, so it leaves X1
        let pt = [rat(1), rat(1)];
        let img = f.evaluate(&pt).unwrap();
        assert_eq!(img, vec![ratio(-3, 2), ratio(-5, 4)]);
        assert!(!ball.contains(&img).unwrap());
        assert!(ball.contains(&pt).unwrap());
        assert!(!x1.contains(&pt).unwrap());
        // the origin is a fixed point and stays
        assert!(x1.contains(&[rat(0), rat(0)]).unwrap());
    }

    #[test]
    fn preimage_under_identity_preserves_membership() {
        let ball = inf_ball();
        let id = PolyMap::identity(2);
        let r = preimage_update(&ball, &id, &ball).unwrap();
        for a in -6..=6 {
            for b in -6..=6 {
                let x = [ratio(a, 5), ratio(b, 5)];
                assert_eq!(r.contains(&x).unwrap(), ball.contains(&x).unwrap());
            }
        }
    }

    #[test]
    fn chain_depth_zero_matches_base_set() {
        let ball = inf_ball();
        let f = PolyMap::identity(2);
        let chain = ImplicitChain::new(
            PolyMap::new(ball.constraints().to_vec()).unwrap(),
            f,
            0,
        )
        .unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                let x = [ratio(a, 3), ratio(b, 3)];
                assert_eq!(chain.contains(&x).unwrap(), ball.contains(&x).unwrap());
            }
        }
        assert_eq!(chain.constraint_count(), 4);
    }

    #[test]
    fn reduce_drops_dominated_and_boundary_redundant() {
        let cfg = SolverConfig::default();
        let b = BoxRegion::new(vec![(rat(-2), rat(2))]).unwrap();

        // {1 - x1^2, 2 - x1^2}: the second has min 1 over the first's set
        let s = SemialgebraicSet::new(vec![p("1 - x1^2", 1), p("2 - x1^2", 1)]).unwrap();
        let r = reduce_redundancy(&s, &b, &cfg).unwrap();
        assert_eq!(r.constraints(), &[p("1 - x1^2", 1)]);

        // duplicated constraint: exactly one copy dropped
        let s = SemialgebraicSet::new(vec![p("1 - x1^2", 1), p("1 - x1^2", 1)]).unwrap();
        let r = reduce_redundancy(&s, &b, &cfg).unwrap();
        assert_eq!(r.constraint_count(), 1);

        // {1 - x1^2, 1 + x1}: r for 1 + x1 over {1 - x1^2 >= 0} is exactly 0
        // at x1 = -1, so it IS redundant (boundary case r = 0).
        let s = SemialgebraicSet::new(vec![p("1 - x1^2", 1), p("1 + x1", 1)]).unwrap();
        let r = reduce_redundancy(&s, &b, &cfg).unwrap();
        assert_eq!(r.constraints(), &[p("1 - x1^2", 1)]);
    }

    #[test]
    fn reduce_preserves_membership_on_box() {
        let cfg = SolverConfig::default();
        let b = BoxRegion::cube(2, -2, 2);
        let s = SemialgebraicSet::new(vec![
            p("1 - x1^2 - x2^2", 2),
            p("4 - x1^2 - x2^2", 2), // redundant
            p("x1 + 2", 2),          // redundant on the disc
        ])
        .unwrap();
        let r = reduce_redundancy(&s, &b, &cfg).unwrap();
        assert!(r.constraint_count() < s.constraint_count());
        for a in -8..=8 {
            for c in -8..=8 {
                let x = [ratio(a, 4), ratio(c, 4)];
                assert_eq!(s.contains(&x).unwrap(), r.contains(&x).unwrap());
            }
        }
    }
}
