//! Outward-rounded floating interval arithmetic, rational boxes, and
//! conservative range enclosure of polynomials over boxes.
//!
//! Rounding model: every primitive operation is computed in round-to-nearest
//! and widened by one ulp on the side that may have rounded — exact results
//! are detected (error-free transformation for sums, power-of-two operands
//! for products and quotients) and kept exact. For any real z, the nearest
//! float c satisfies z ∈ [next_down(c), next_up(c)], so the widened result
//! contains the true value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

const MANTISSA_MASK: u64 = 0x000F_FFFF_FFFF_FFFF;
const EXPONENT_MASK: u64 = 0x7FF0_0000_0000_0000;

/// ±2^k for normal k: the safe "multiplication by me is exact" class.
#[inline]
fn is_pow2(x: f64) -> bool {
    let b = x.to_bits();
    (b & MANTISSA_MASK) == 0 && (b & EXPONENT_MASK) != 0 && x.is_finite()
}

/// Knuth's TwoSum error term; zero iff a + b rounded exactly.
#[inline]
fn add_is_exact(a: f64, b: f64, s: f64) -> bool {
    if !s.is_finite() {
        return false;
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    err == 0.0
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return f64::NEG_INFINITY;
    }
    if add_is_exact(a, b, s) {
        s
    } else {
        s.next_down()
    }
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return f64::INFINITY;
    }
    if add_is_exact(a, b, s) {
        s
    } else {
        s.next_up()
    }
}

#[inline]
fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
fn mul_is_exact(a: f64, b: f64, p: f64) -> bool {
    if p == 0.0 {
        return a == 0.0 || b == 0.0;
    }
    p.is_finite() && p.abs() >= f64::MIN_POSITIVE && (is_pow2(a) || is_pow2(b))
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_nan() {
        return f64::NEG_INFINITY;
    }
    if mul_is_exact(a, b, p) {
        p
    } else {
        p.next_down()
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_nan() {
        return f64::INFINITY;
    }
    if mul_is_exact(a, b, p) {
        p
    } else {
        p.next_up()
    }
}

#[inline]
fn div_is_exact(a: f64, b: f64, q: f64) -> bool {
    if q == 0.0 {
        return a == 0.0 && b != 0.0;
    }
    q.is_finite() && q.abs() >= f64::MIN_POSITIVE && is_pow2(b)
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if div_is_exact(a, b, q) {
        q
    } else {
        q.next_down()
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q.is_nan() {
        return f64::INFINITY;
    }
    if div_is_exact(a, b, q) {
        q
    } else {
        q.next_up()
    }
}

/// Lower bound of `x^e` for `x >= 0`, by binary exponentiation with
/// direction-aware rounding.
pub(crate) fn mag_pow_down(x: f64, e: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = 1.0f64;
    let mut base = x;
    let mut e = e;
    if e == 0 {
        return 1.0;
    }
    loop {
        if e & 1 == 1 {
            acc = mul_down(acc, base).max(0.0);
        }
        e >>= 1;
        if e == 0 {
            return acc;
        }
        base = mul_down(base, base).max(0.0);
    }
}

/// Upper bound of `x^e` for `x >= 0`.
pub(crate) fn mag_pow_up(x: f64, e: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = 1.0f64;
    let mut base = x;
    let mut e = e;
    if e == 0 {
        return 1.0;
    }
    loop {
        if e & 1 == 1 {
            acc = mul_up(acc, base);
        }
        e >>= 1;
        if e == 0 {
            return acc;
        }
        base = mul_up(base, base);
    }
}

fn signed_pow_down(x: f64, e: u32) -> f64 {
    if x >= 0.0 {
        mag_pow_down(x, e)
    } else if e % 2 == 0 {
        mag_pow_down(-x, e)
    } else {
        -mag_pow_up(-x, e)
    }
}

fn signed_pow_up(x: f64, e: u32) -> f64 {
    if x >= 0.0 {
        mag_pow_up(x, e)
    } else if e % 2 == 0 {
        mag_pow_up(-x, e)
    } else {
        -mag_pow_down(-x, e)
    }
}

/// Smallest float u with a certified `u^e >= y` (so u bounds `y^(1/e)` from
/// above), found by bisection on the monotone bit order of nonnegative
/// floats. Exact at representable roots whose certification multiplies
/// powers of two.
pub(crate) fn root_up(y: f64, e: u32) -> f64 {
    debug_assert!(y >= 0.0 && e >= 1);
    if e == 1 || y == 0.0 || y == 1.0 {
        return y;
    }
    if y == f64::INFINITY {
        return f64::INFINITY;
    }
    let pred = |u: f64| mag_pow_down(u, e) >= y;
    if pred(0.0) {
        return 0.0;
    }
    let mut lo_bits = 0u64; // pred false
    let mut hi_bits = f64::MAX.to_bits(); // pred true (saturating powers)
    debug_assert!(pred(f64::MAX));
    while hi_bits - lo_bits > 1 {
        let mid = lo_bits + (hi_bits - lo_bits) / 2;
        if pred(f64::from_bits(mid)) {
            hi_bits = mid;
        } else {
            lo_bits = mid;
        }
    }
    f64::from_bits(hi_bits)
}

/// Largest float u with a certified `u^e <= y` (bounds `y^(1/e)` from below).
pub(crate) fn root_down(y: f64, e: u32) -> f64 {
    debug_assert!(y >= 0.0 && e >= 1);
    if e == 1 || y == 0.0 || y == 1.0 {
        return y;
    }
    if y == f64::INFINITY {
        return f64::MAX;
    }
    let pred = |u: f64| mag_pow_up(u, e) <= y;
    if !pred(0.0) {
        return 0.0;
    }
    let mut lo_bits = 0u64; // pred true
    let mut hi_bits = f64::MAX.to_bits();
    if pred(f64::MAX) {
        return f64::MAX;
    }
    while hi_bits - lo_bits > 1 {
        let mid = lo_bits + (hi_bits - lo_bits) / 2;
        if pred(f64::from_bits(mid)) {
            lo_bits = mid;
        } else {
            hi_bits = mid;
        }
    }
    f64::from_bits(lo_bits)
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn entire() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_empty_crossing(&self) -> bool {
        self.lo > self.hi
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, o.lo),
            hi: add_up(self.hi, o.hi),
        }
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, o.hi),
            hi: sub_up(self.hi, o.lo),
        }
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(self, o: Interval) -> Interval {
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        // 0 * inf produces NaN; the directed helpers map it to ±inf (sound).
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            if (a * b).is_nan() {
                return Interval::entire();
            }
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Interval { lo, hi }
    }

    /// Division by a sign-definite interval; `None` when the divisor
    /// straddles zero.
    pub fn div(self, o: Interval) -> Option<Interval> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            if (a / b).is_nan() {
                return Some(Interval::entire());
            }
            lo = lo.min(div_down(a, b));
            hi = hi.max(div_up(a, b));
        }
        Some(Interval { lo, hi })
    }

    /// Tight power: exploits monotonicity and evenness instead of repeated
    /// interval multiplication, so `[-1,1]^2 = [0,1]` rather than `[-1,1]`.
    pub fn powi(self, e: u32) -> Interval {
        match e {
            0 => Interval::ONE,
            1 => self,
            _ => {
                if e % 2 == 1 {
                    Interval {
                        lo: signed_pow_down(self.lo, e),
                        hi: signed_pow_up(self.hi, e),
                    }
                } else if self.lo >= 0.0 {
                    Interval {
                        lo: mag_pow_down(self.lo, e),
                        hi: mag_pow_up(self.hi, e),
                    }
                } else if self.hi <= 0.0 {
                    Interval {
                        lo: mag_pow_down(-self.hi, e),
                        hi: mag_pow_up(-self.lo, e),
                    }
                } else {
                    let m = (-self.lo).max(self.hi);
                    Interval {
                        lo: 0.0,
                        hi: mag_pow_up(m, e),
                    }
                }
            }
        }
    }

    pub fn hull(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    /// Intersection of two enclosures of the same quantity. Falls back to
    /// the hull if rounding ever produced an empty crossing.
    pub fn intersect(self, o: Interval) -> Interval {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            self.hull(o)
        }
    }

    /// Smallest-by-construction interval with float endpoints containing the
    /// rational `q`, certified by exact comparison. Representable rationals
    /// convert to zero-width intervals.
    pub fn from_rational(q: &BigRational) -> Interval {
        let est = rational_to_f64_approx(q);
        let mut lo = if est.is_finite() {
            est
        } else {
            f64::MAX.copysign(est)
        };
        let mut hi = lo;
        while BigRational::from_float(lo).map_or(false, |r| r > *q) {
            lo = lo.next_down();
        }
        while BigRational::from_float(hi).map_or(false, |r| r < *q) {
            hi = hi.next_up();
        }
        Interval { lo, hi }
    }

    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational) -> Interval {
        Interval {
            lo: Self::from_rational(lo).lo,
            hi: Self::from_rational(hi).hi,
        }
    }
}

/// Nearest-ish f64 for a rational of arbitrary magnitude. Accuracy within a
/// couple of ulps is enough; `Interval::from_rational` certifies afterwards.
fn rational_to_f64_approx(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    let n = q.numer().abs();
    let d = q.denom().clone();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let e = nb - db; // |q| is within a factor of 2 of 2^e
    if e > 1100 {
        return sign * f64::INFINITY;
    }
    if e < -1100 {
        return sign * 0.0;
    }
    // Scale so the integer quotient carries ~80 significant bits.
    let shift = 80 - e;
    let scaled: BigInt = if shift >= 0 {
        n << (shift as usize)
    } else {
        n >> ((-shift) as usize)
    };
    let quot = scaled / &d;
    let qf = quot.to_f64().unwrap_or(f64::INFINITY);
    // Undo the scaling in chunks so gradual under/overflow stays correct.
    let mut est = sign * qf;
    let mut rem = -shift;
    while rem != 0 && est != 0.0 && est.is_finite() {
        let step = rem.clamp(-960, 960);
        est *= 2.0f64.powi(step as i32);
        rem -= step;
    }
    est
}

/// Axis-aligned box with exact rational endpoints: the search region for the
/// global minimizer and the carrier of branch-and-bound subdivision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoxRegion {
    bounds: Vec<(BigRational, BigRational)>,
}

impl BoxRegion {
    pub fn new(bounds: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidBox(
                "box must have at least one dimension".into(),
            ));
        }
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(Error::InvalidBox(format!(
                    "dimension {}: lower bound exceeds upper bound",
                    i + 1
                )));
            }
        }
        Ok(BoxRegion { bounds })
    }

    /// `[lo, hi]^n` from integer endpoints.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        BoxRegion::new(vec![(crate::poly::rat(lo), crate::poly::rat(hi)); n]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(BigRational, BigRational)] {
        &self.bounds
    }

    pub fn midpoint(&self) -> Vec<BigRational> {
        self.bounds
            .iter()
            .map(|(lo, hi)| (lo + hi) / crate::poly::rat(2))
            .collect()
    }

    pub fn contains_point(&self, x: &[BigRational]) -> bool {
        x.len() == self.dim()
            && self
                .bounds
                .iter()
                .zip(x)
                .all(|((lo, hi), xi)| lo <= xi && xi <= hi)
    }

    pub fn to_intervals(&self) -> Vec<Interval> {
        self.bounds
            .iter()
            .map(|(lo, hi)| Interval::from_rational_bounds(lo, hi))
            .collect()
    }

    pub fn width_f64(&self, i: usize) -> f64 {
        let iv = Interval::from_rational_bounds(&self.bounds[i].0, &self.bounds[i].1);
        iv.width()
    }

    pub fn max_width_f64(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.width_f64(i))
            .fold(0.0, f64::max)
    }

    /// Widest dimension; ties broken by lowest index.
    pub fn widest_dim(&self) -> usize {
        let mut best = 0;
        let mut best_w = self.width_f64(0);
        for i in 1..self.dim() {
            let w = self.width_f64(i);
            if w > best_w {
                best = i;
                best_w = w;
            }
        }
        best
    }

    /// Bisects dimension `i` at its exact rational midpoint.
    pub fn split(&self, i: usize) -> (BoxRegion, BoxRegion) {
        let (lo, hi) = &self.bounds[i];
        let mid = (lo + hi) / crate::poly::rat(2);
        let mut left = self.bounds.clone();
        let mut right = self.bounds.clone();
        left[i] = (lo.clone(), mid.clone());
        right[i] = (mid, hi.clone());
        (BoxRegion { bounds: left }, BoxRegion { bounds: right })
    }

    /// Intersects with float bounds (taken at their exact rational values).
    /// Returns `None` when the intersection is empty.
    pub fn intersect_floats(&self, fbounds: &[Interval]) -> Option<BoxRegion> {
        debug_assert_eq!(fbounds.len(), self.dim());
        let mut bounds = Vec::with_capacity(self.dim());
        for ((lo, hi), iv) in self.bounds.iter().zip(fbounds) {
            let flo = BigRational::from_float(iv.lo);
            let fhi = BigRational::from_float(iv.hi);
            let nlo = match flo {
                Some(v) if v > *lo => v,
                _ => lo.clone(),
            };
            let nhi = match fhi {
                Some(v) if v < *hi => v,
                _ => hi.clone(),
            };
            if nlo > nhi {
                return None;
            }
            bounds.push((nlo, nhi));
        }
        Some(BoxRegion { bounds })
    }
}

/// A polynomial with its coefficients converted once to outward-rounded
/// intervals, ready for repeated evaluation over boxes.
#[derive(Clone, Debug)]
pub struct IntervalPoly {
    n: usize,
    terms: Vec<(Vec<u32>, Interval)>,
    max_exp: Vec<u32>,
}

impl From<&Polynomial> for IntervalPoly {
    fn from(p: &Polynomial) -> Self {
        let mut max_exp = vec![0u32; p.n()];
        let terms = p
            .terms()
            .map(|(m, c)| {
                for (i, &e) in m.exponents().iter().enumerate() {
                    max_exp[i] = max_exp[i].max(e);
                }
                (m.exponents().to_vec(), Interval::from_rational(c))
            })
            .collect();
        IntervalPoly {
            n: p.n(),
            terms,
            max_exp,
        }
    }
}

/// Power tables `x_i^e` for `e = 0..=max_exp[i]`.
pub(crate) fn power_tables(x: &[Interval], max_exp: &[u32]) -> Vec<Vec<Interval>> {
    x.iter()
        .zip(max_exp)
        .map(|(xi, &me)| (0..=me).map(|e| xi.powi(e)).collect())
        .collect()
}

impl IntervalPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn term_list(&self) -> &[(Vec<u32>, Interval)] {
        &self.terms
    }

    pub(crate) fn max_exp(&self) -> &[u32] {
        &self.max_exp
    }

    /// Natural interval extension, term by term. Each monomial's range is
    /// exact up to rounding (factors are independent); conservatism comes
    /// only from summing across terms.
    pub fn eval(&self, x: &[Interval]) -> Interval {
        debug_assert_eq!(x.len(), self.n);
        let pows = power_tables(x, &self.max_exp);
        let mut acc = Interval::ZERO;
        for (exps, c) in &self.terms {
            acc = acc.add(Self::term_value(exps, *c, &pows));
        }
        acc
    }

    pub(crate) fn term_value(exps: &[u32], c: Interval, pows: &[Vec<Interval>]) -> Interval {
        let mut t = c;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                t = t.mul(pows[i][e as usize]);
            }
        }
        t
    }
}

impl Polynomial {
    /// Conservative range enclosure over a box: the returned interval
    /// contains `{p(x) : x in b}`. Sound under outward rounding; tightness
    /// is not guaranteed.
    pub fn enclose_range(&self, b: &BoxRegion) -> Result<Interval> {
        if b.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: b.dim(),
                context: "enclosure box",
            });
        }
        Ok(IntervalPoly::from(self).eval(&b.to_intervals()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn exact_sums_stay_exact() {
        let a = Interval::point(1.0);
        let b = Interval::point(-1.0);
        let s = a.add(b);
        assert_eq!(s, Interval::ZERO);
        let t = Interval::point(0.5).add(Interval::point(0.25));
        assert_eq!(t, Interval::point(0.75));
    }

    #[test]
    fn inexact_sums_widen_outward() {
        let s = Interval::point(0.1).add(Interval::point(0.2));
        assert!(s.lo < s.hi);
        assert!(s.lo <= 0.3 && 0.3 <= s.hi || s.contains(0.1 + 0.2));
    }

    #[test]
    fn pow2_products_and_quotients_exact() {
        let p = Interval::point(0.5).mul(Interval::point(3.0));
        assert_eq!(p, Interval::point(1.5));
        let q = Interval::point(3.0).div(Interval::point(4.0)).unwrap();
        assert_eq!(q, Interval::point(0.75));
        let r = Interval::point(1.0).div(Interval::point(3.0)).unwrap();
        assert!(r.lo < r.hi); // 1/3 is not representable
        assert!(r.contains(1.0 / 3.0));
    }

    #[test]
    fn div_by_zero_straddling_is_none() {
        assert!(Interval::point(1.0)
            .div(Interval::new(-1.0, 1.0))
            .is_none());
    }

    #[test]
    fn powi_even_tightens_through_zero() {
        let x = Interval::new(-1.0, 1.0);
        let sq = x.powi(2);
        assert_eq!(sq, Interval::new(0.0, 1.0)); // exact: 1*1 is a pow2 product
    }

    #[test]
    fn powi_odd_preserves_sign_monotonicity() {
        let x = Interval::new(-2.0, 3.0);
        let c = x.powi(3);
        assert!(c.lo <= -8.0 && c.hi >= 27.0);
        assert!(c.lo > -8.0 - 1e-9 && c.hi < 27.0 + 1e-9);
    }

    #[test]
    fn roots_certified_and_exact_at_pow2_powers() {
        assert_eq!(root_up(1.0, 2), 1.0);
        assert_eq!(root_down(1.0, 2), 1.0);
        assert_eq!(root_up(4.0, 2), 2.0);
        assert_eq!(root_down(4.0, 2), 2.0);
        assert_eq!(root_up(0.25, 2), 0.5);
        // generic values: bracketing within an ulp or two
        let y = 2.0;
        let up = root_up(y, 2);
        let dn = root_down(y, 2);
        assert!(dn <= up);
        assert!(up - dn < 1e-15);
        assert!(mag_pow_down(up, 2) >= y);
        assert!(mag_pow_up(dn, 2) <= y);
        // high exponents
        let u = root_up(1e30, 64);
        assert!(mag_pow_down(u, 64) >= 1e30);
    }

    #[test]
    fn from_rational_certified_outward() {
        let q = ratio(1, 3);
        let iv = Interval::from_rational(&q);
        assert!(BigRational::from_float(iv.lo).unwrap() <= q);
        assert!(BigRational::from_float(iv.hi).unwrap() >= q);
        assert!(iv.width() < 1e-15);

        // representable rationals convert exactly
        let half = ratio(1, 2);
        let iv = Interval::from_rational(&half);
        assert_eq!(iv, Interval::point(0.5));

        // huge denominator (the kind produced by deep iteration)
        let big = BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(3000));
        let iv = Interval::from_rational(&big);
        assert!(iv.lo >= 0.0 && iv.hi > 0.0 && iv.hi < 1e-300);

        // huge numerator saturates soundly
        let huge = BigRational::from_integer(num_bigint::BigInt::from(2).pow(3000));
        let iv = Interval::from_rational(&huge);
        assert_eq!(iv.hi, f64::INFINITY);
        assert!(BigRational::from_float(iv.lo).unwrap() <= huge);
    }

    #[test]
    fn box_split_is_exact() {
        let b = BoxRegion::new(vec![(rat(-2), rat(2)), (rat(0), rat(1))]).unwrap();
        let (l, r) = b.split(0);
        assert_eq!(l.bounds()[0].1, rat(0));
        assert_eq!(r.bounds()[0].0, rat(0));
        assert_eq!(b.widest_dim(), 0);
    }

    #[test]
    fn box_rejects_inverted_bounds() {
        assert!(BoxRegion::new(vec![(rat(1), rat(0))]).is_err());
    }

    #[test]
    fn box_intersect_floats() {
        let b = BoxRegion::cube(2, -2, 2);
        let tighter = vec![Interval::new(-1.0, 0.5), Interval::new(-3.0, 3.0)];
        let r = b.intersect_floats(&tighter).unwrap();
        assert_eq!(r.bounds()[0], (rat(-1), ratio(1, 2)));
        assert_eq!(r.bounds()[1], (rat(-2), rat(2)));
        let disjoint = vec![Interval::new(3.0, 4.0), Interval::new(-1.0, 1.0)];
        assert!(b.intersect_floats(&disjoint).is_none());
    }

    #[test]
    fn enclose_range_linear_and_constant() {
        let p = crate::parse::parse_polynomial("x1", 2).unwrap();
        let b = BoxRegion::cube(2, -1, 1);
        let iv = p.enclose_range(&b).unwrap();
        assert_eq!(iv, Interval::new(-1.0, 1.0));

        let c = Polynomial::constant(2, rat(5));
        let iv = c.enclose_range(&b).unwrap();
        assert!(iv.contains(5.0));
    }

    #[test]
    fn enclose_range_contains_sampled_values() {
        // x1^2 + x2^2 over [-1,1]^2 must contain [0, 2]
        let p = crate::parse::parse_polynomial("x1^2 + x2^2", 2).unwrap();
        let b = BoxRegion::cube(2, -1, 1);
        let iv = p.enclose_range(&b).unwrap();
        assert!(iv.lo <= 0.0 && iv.hi >= 2.0);
        for i in 0..=10 {
            for j in 0..=10 {
                let x = [ratio(i - 5, 5), ratio(j - 5, 5)];
                let v = p.evaluate(&x).unwrap();
                let viv = Interval::from_rational(&v);
                assert!(iv.lo <= viv.lo && viv.hi <= iv.hi);
            }
        }
    }
}
