//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! `Polynomial` is the carrier for every map in this crate: dynamics,
//! constraint maps, composed iterates, and partial update maps. Coefficients
//! are `BigRational`, so composition and set descriptions stay exact no
//! matter how far the degree grows. Canonical form: terms are kept in a
//! `BTreeMap` keyed by graded-lexicographic monomial order and no stored
//! coefficient is zero, so equal polynomials compare equal structurally.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Convenience constructor for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Convenience constructor for the rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector of a single monomial; length equals the ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The constant monomial (all exponents zero) in `n` variables.
    pub fn constant(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// The monomial `x_{i}` (zero-based index) in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Graded lexicographic order: compare total degree first, then exponents
/// lexicographically. Fixed so canonical forms and emitted files are
/// reproducible.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(n), c);
        }
        Polynomial { n, terms }
    }

    /// The polynomial `x_{i}` (zero-based index) in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for dimension {n}");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(n, i), BigRational::one());
        Polynomial { n, terms }
    }

    /// Builds a polynomial from raw terms, summing duplicates and dropping
    /// zero coefficients.
    pub fn from_terms<I>(n: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in raw {
            if m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.len(),
                    context: "monomial exponent vector",
                });
            }
            if c.is_zero() {
                continue;
            }
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Ok(Polynomial { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        // BTreeMap is grlex-ordered, so the last key has maximal degree.
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch in add");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Polynomial { n: self.n, terms }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch in mul");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.n);
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { n: self.n, terms }
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: u32) -> Polynomial {
        if e == 0 {
            return Polynomial::one(self.n);
        }
        let mut base = self.clone();
        let mut acc: Option<Polynomial> = None;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
                context: "evaluation point",
            });
        }
        let pows = power_table(x, &max_exponents(self));
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term *= &pows[i][e as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `self ∘ g`: substitute `g`'s components for the variables of `self`.
    /// Result is canonical; `q(x) = self(g(x))` exactly for all x.
    pub fn compose(&self, g: &PolyMap) -> Result<Polynomial> {
        if g.n_out() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.n_out(),
                context: "composition inner map output",
            });
        }
        if g.is_identity() {
            return Ok(self.clone());
        }
        let n_new = g.n_in();
        let maxes = max_exponents(self);
        // Cache of g_i^e for every exponent that actually occurs.
        let mut pows: Vec<Vec<Polynomial>> = Vec::with_capacity(self.n);
        for (i, &me) in maxes.iter().enumerate() {
            let mut col = Vec::with_capacity(me as usize + 1);
            col.push(Polynomial::one(n_new));
            for e in 1..=me as usize {
                let next = col[e - 1].mul(&g.components()[i]);
                col.push(next);
            }
            pows.push(col);
        }
        let mut acc = Polynomial::zero(n_new);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(n_new, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&pows[i][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable `i` (zero-based).
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        assert!(i < self.n, "variable index out of range");
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] = e - 1;
            terms.insert(Monomial::new(exps), c * rat(e as i64));
        }
        Polynomial { n: self.n, terms }
    }
}

fn max_exponents(p: &Polynomial) -> Vec<u32> {
    let mut maxes = vec![0u32; p.n()];
    for (m, _) in p.terms() {
        for (i, &e) in m.exponents().iter().enumerate() {
            maxes[i] = maxes[i].max(e);
        }
    }
    maxes
}

/// Powers `x_i^e` for `e = 0..=maxes[i]`, shared across the terms of one
/// evaluation.
fn power_table(x: &[BigRational], maxes: &[u32]) -> Vec<Vec<BigRational>> {
    x.iter()
        .zip(maxes)
        .map(|(xi, &me)| {
            let mut col = Vec::with_capacity(me as usize + 1);
            col.push(BigRational::one());
            for e in 1..=me as usize {
                let next = &col[e - 1] * xi;
                col.push(next);
            }
            col
        })
        .collect()
}

impl fmt::Display for Polynomial {
    /// Canonical text form: terms in descending graded-lex order, `^` for
    /// powers, exact `p/q` coefficients. `parse_polynomial` inverts this.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || m.is_constant();
            if show_coeff {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            let mut first_factor = !show_coeff;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_factor {
                    write!(f, "*")?;
                }
                first_factor = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
            let _ = first_factor;
        }
        Ok(())
    }
}

/// Vector of polynomials over one shared variable set. Houses the dynamics
/// `f : R^n -> R^n` and the constraint map `phi0 : R^n -> R^m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    n_in: usize,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n_in = match components.first() {
            Some(p) => p.n(),
            None => {
                return Err(Error::InvalidConfig(
                    "polynomial map needs at least one component".into(),
                ))
            }
        };
        for p in &components {
            if p.n() != n_in {
                return Err(Error::DimensionMismatch {
                    expected: n_in,
                    found: p.n(),
                    context: "map component ambient dimension",
                });
            }
        }
        Ok(PolyMap { n_in, components })
    }

    /// The identity map on `R^n`.
    pub fn identity(n: usize) -> Self {
        PolyMap {
            n_in: n,
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.n_out() == self.n_in
            && self
                .components
                .iter()
                .enumerate()
                .all(|(i, p)| *p == Polynomial::var(self.n_in, i))
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        self.components.iter().map(|p| p.evaluate(x)).collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        let components = self
            .components
            .iter()
            .map(|p| p.compose(inner))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            n_in: inner.n_in(),
            components,
        })
    }

    /// The k-th functional power `self^k`, with `self^0 = identity`.
    /// Requires a square map (n_out == n_in).
    pub fn iterate(&self, k: u32) -> Result<PolyMap> {
        if self.n_out() != self.n_in() {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                found: self.n_out(),
                context: "iterated map must be square",
            });
        }
        let mut acc = PolyMap::identity(self.n_in);
        for _ in 0..k {
            // Outer factor kept small: f^{j+1} = f ∘ f^j.
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        crate::parse::parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn evaluate_direct_substitution() {
        // x1^2 + x2 at (1, 2) = 3
        let q = p("x1^2 + x2", 2);
        let v = q.evaluate(&[rat(1), rat(2)]).unwrap();
        assert_eq!(v, rat(3));
    }

    #[test]
    fn evaluate_zero_polynomial() {
        let z = Polynomial::zero(3);
        assert_eq!(z.evaluate(&[rat(7), rat(-2), rat(0)]).unwrap(), rat(0));
        assert_eq!(z.degree(), 0);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let q = p("x1 + x2", 2);
        assert!(matches!(
            q.evaluate(&[rat(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_identity_is_noop() {
        let q = p("3/2*x1^2*x2 - x2 + 1", 2);
        let c = q.compose(&PolyMap::identity(2)).unwrap();
        assert_eq!(c, q);
    }

    #[test]
    fn compose_coordinate_projection() {
        // p = x1, g = (x1+x2, x1-x2) -> x1 + x2
        let g = PolyMap::new(vec![p("x1 + x2", 2), p("x1 - x2", 2)]).unwrap();
        let c = Polynomial::var(2, 0).compose(&g).unwrap();
        assert_eq!(c, p("x1 + x2", 2));
    }

    #[test]
    fn compose_agrees_with_pointwise_evaluation() {
        let q = p("1 - x1^2 - x2^2", 2);
        let g = PolyMap::new(vec![p("1/2*x1 - x2^2", 2), p("x1*x2 + 1/3", 2)]).unwrap();
        let c = q.compose(&g).unwrap();
        for (a, b) in [(0i64, 0i64), (1, 1), (-2, 3), (5, -7), (11, 13)] {
            let x = [ratio(a, 4), ratio(b, 4)];
            let inner = g.evaluate(&x).unwrap();
            assert_eq!(c.evaluate(&x).unwrap(), q.evaluate(&inner).unwrap());
        }
    }

    #[test]
    fn iterate_zero_is_identity_and_one_is_self() {
        let f = PolyMap::new(vec![p("x2", 2), p("x1*x2", 2)]).unwrap();
        assert!(f.iterate(0).unwrap().is_identity());
        assert_eq!(f.iterate(1).unwrap(), f);
    }

    #[test]
    fn pow_and_mul_consistent() {
        let q = p("x1 - 2*x2", 2);
        assert_eq!(q.pow(3), q.mul(&q).mul(&q));
        assert_eq!(q.pow(0), Polynomial::one(2));
    }

    #[test]
    fn canonical_no_zero_coefficients_after_cancellation() {
        let a = p("x1^2 + x2", 2);
        let b = p("-x1^2 + x2", 2);
        let s = a.add(&b);
        assert_eq!(s, p("2*x2", 2));
        assert!(s.terms().all(|(_, c)| !c.is_zero()));
        let d = a.sub(&a);
        assert!(d.is_zero());
        assert_eq!(d.term_count(), 0);
    }

    #[test]
    fn display_canonical_and_reparsable() {
        let q = p("-x1^4 + 1/4*x1^2 - 2*x1^2*x2 + x1*x2 + x1^3 - x2^2 + 1/2*x2", 2);
        let s = q.to_string();
        assert_eq!(crate::parse::parse_polynomial(&s, 2).unwrap(), q);
        // descending grlex starts with the degree-4 block
        assert!(s.starts_with("-x1^4"));
    }

    #[test]
    fn partial_derivative_basic() {
        let q = p("x1^3*x2 + 2*x2^2 - 5", 2);
        assert_eq!(q.partial_derivative(0), p("3*x1^2*x2", 2));
        assert_eq!(q.partial_derivative(1), p("x1^3 + 4*x2", 2));
    }

    #[test]
    fn grlex_ordering() {
        let m1 = Monomial::new(vec![1, 0]); // x1
        let m2 = Monomial::new(vec![0, 1]); // x2
        let m3 = Monomial::new(vec![0, 2]); // x2^2
        assert!(m2 < m1); // same degree, lex on exponents
        assert!(m1 < m3); // degree dominates
    }
}
