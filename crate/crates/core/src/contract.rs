//! Forward-backward box contraction under polynomial inequality constraints.
//!
//! For a constraint `c(x) >= 0` over a box, the forward pass encloses every
//! term; the backward pass propagates the nonnegativity requirement to each
//! term (a term can be no smaller than the requirement minus what the others
//! can contribute) and inverts each term's monomial factor by factor,
//! shrinking the per-variable intervals. Everything is outward-rounded, so a
//! contracted box still contains every feasible point of the original; an
//! empty intersection certifies that the box holds no feasible point.

use crate::interval::{power_tables, root_down, root_up, Interval, IntervalPoly};

#[derive(Debug, PartialEq, Eq)]
pub enum ContractOutcome {
    /// No point of the box satisfies the constraint.
    Empty,
    /// Whether any variable interval was narrowed.
    Done { changed: bool },
}

fn add_down(a: f64, b: f64) -> f64 {
    Interval::point(a).add(Interval::point(b)).lo
}

fn add_up(a: f64, b: f64) -> f64 {
    Interval::point(a).add(Interval::point(b)).hi
}

/// One HC4 revise of `c(x) >= 0` over `x`, in place.
pub fn contract_nonneg(c: &IntervalPoly, x: &mut [Interval]) -> ContractOutcome {
    let terms = c.term_list();
    let m = terms.len();
    if m == 0 {
        return ContractOutcome::Done { changed: false }; // zero polynomial: 0 >= 0
    }
    let pows = power_tables(x, c.max_exp());
    let t: Vec<Interval> = terms
        .iter()
        .map(|(exps, coeff)| IntervalPoly::term_value(exps, *coeff, &pows))
        .collect();

    // Directed prefix/suffix sums of the term enclosures.
    let mut pre_lo = vec![0.0f64; m + 1];
    let mut pre_hi = vec![0.0f64; m + 1];
    for j in 0..m {
        pre_lo[j + 1] = add_down(pre_lo[j], t[j].lo);
        pre_hi[j + 1] = add_up(pre_hi[j], t[j].hi);
    }
    let mut suf_lo = vec![0.0f64; m + 1];
    let mut suf_hi = vec![0.0f64; m + 1];
    for j in (0..m).rev() {
        suf_lo[j] = add_down(suf_lo[j + 1], t[j].lo);
        suf_hi[j] = add_up(suf_hi[j + 1], t[j].hi);
    }
    let total = Interval::new(pre_lo[m].min(pre_hi[m]), pre_hi[m]);
    if total.hi < 0.0 {
        return ContractOutcome::Empty;
    }
    // The constraint pins the total to [0, total.hi].
    let tgt = Interval::new(total.lo.max(0.0).min(total.hi), total.hi);

    let mut changed = false;
    for j in 0..m {
        // Enclosure of the sum of all other terms.
        let others = Interval::new(
            add_down(pre_lo[j], suf_lo[j + 1]).min(add_up(pre_hi[j], suf_hi[j + 1])),
            add_up(pre_hi[j], suf_hi[j + 1]),
        );
        // Required range for term j, intersected with what it can attain.
        let need = tgt.sub(others);
        let lo = need.lo.max(t[j].lo);
        let hi = need.hi.min(t[j].hi);
        if lo > hi {
            return ContractOutcome::Empty;
        }
        let allowed = Interval::new(lo, hi);

        let (exps, coeff) = &terms[j];
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            // Factor of term j excluding x_i^e.
            let mut factor = *coeff;
            for (l, &el) in exps.iter().enumerate() {
                if l != i && el > 0 {
                    factor = factor.mul(pows[l][el as usize]);
                }
            }
            let Some(pow_range) = allowed.div(factor) else {
                continue; // factor straddles zero: no information
            };
            match narrow_by_power(x[i], pow_range, e) {
                None => return ContractOutcome::Empty,
                Some(nx) => {
                    if nx.lo > x[i].lo || nx.hi < x[i].hi {
                        x[i] = nx;
                        changed = true;
                    }
                }
            }
        }
    }
    ContractOutcome::Done { changed }
}

/// Narrows `xi` under the requirement `xi^e ∈ p`. Returns `None` when no
/// point of `xi` satisfies it.
fn narrow_by_power(xi: Interval, p: Interval, e: u32) -> Option<Interval> {
    if e == 1 {
        return clip(xi, p.lo, p.hi);
    }
    if e % 2 == 0 {
        if p.hi < 0.0 {
            return None; // even power cannot be negative
        }
        let mag_hi = root_up(p.hi, e);
        let mut out = clip(xi, -mag_hi, mag_hi)?;
        // Inner carve only when the sign is already determined.
        if p.lo > 0.0 {
            let mag_lo = root_down(p.lo, e);
            if out.lo >= 0.0 {
                out = clip(out, mag_lo, f64::INFINITY)?;
            } else if out.hi <= 0.0 {
                out = clip(out, f64::NEG_INFINITY, -mag_lo)?;
            }
        }
        Some(out)
    } else {
        let lo = signed_root_down(p.lo, e);
        let hi = signed_root_up(p.hi, e);
        clip(xi, lo, hi)
    }
}

fn signed_root_up(y: f64, e: u32) -> f64 {
    if y >= 0.0 {
        root_up(y, e)
    } else {
        -root_down(-y, e)
    }
}

fn signed_root_down(y: f64, e: u32) -> f64 {
    if y >= 0.0 {
        root_down(y, e)
    } else {
        -root_up(-y, e)
    }
}

fn clip(x: Interval, lo: f64, hi: f64) -> Option<Interval> {
    let nlo = x.lo.max(lo);
    let nhi = x.hi.min(hi);
    if nlo > nhi {
        None
    } else {
        Some(Interval::new(nlo, nhi))
    }
}

/// Sweeps every constraint over the box until a fixed point or the sweep
/// cap; `None` certifies the box holds no feasible point.
pub fn contract_all(
    constraints: &[IntervalPoly],
    x: &mut [Interval],
    max_sweeps: u32,
) -> Option<bool> {
    let mut any = false;
    for _ in 0..max_sweeps {
        let mut this_sweep = false;
        for c in constraints {
            match contract_nonneg(c, x) {
                ContractOutcome::Empty => return None,
                ContractOutcome::Done { changed } => this_sweep |= changed,
            }
        }
        any |= this_sweep;
        if !this_sweep {
            break;
        }
    }
    Some(any)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ip(s: &str, n: usize) -> IntervalPoly {
        IntervalPoly::from(&parse_polynomial(s, n).unwrap())
    }

    #[test]
    fn contracts_square_bound_exactly() {
        // 1 - x1^2 >= 0 over [-2, 2] contracts to exactly [-1, 1]
        let c = ip("1 - x1^2", 1);
        let mut x = vec![Interval::new(-2.0, 2.0)];
        let out = contract_nonneg(&c, &mut x);
        assert_eq!(out, ContractOutcome::Done { changed: true });
        assert_eq!(x[0], Interval::new(-1.0, 1.0));
    }

    #[test]
    fn contracts_linear_halfspace() {
        // 1 + x1 >= 0 over [-2, 2] contracts to [-1, 2]
        let c = ip("1 + x1", 1);
        let mut x = vec![Interval::new(-2.0, 2.0)];
        contract_nonneg(&c, &mut x);
        assert_eq!(x[0], Interval::new(-1.0, 2.0));
    }

    #[test]
    fn certifies_empty_box() {
        // x1 - 3 >= 0 has no solution in [-2, 2]
        let c = ip("x1 - 3", 1);
        let mut x = vec![Interval::new(-2.0, 2.0)];
        assert_eq!(contract_nonneg(&c, &mut x), ContractOutcome::Empty);
    }

    #[test]
    fn disc_contraction_is_sound() {
        // 1 - x1^2 - x2^2 >= 0 over a box near the boundary: the contracted
        // box must keep every feasible point.
        let c = ip("1 - x1^2 - x2^2", 2);
        let mut x = vec![Interval::new(0.5, 2.0), Interval::new(-0.5, 0.5)];
        let out = contract_nonneg(&c, &mut x);
        assert_ne!(out, ContractOutcome::Empty);
        assert!(x[0].hi <= 1.0 + 1e-12);
        // the feasible corner (x1, x2) with x1^2 = 1 - x2^2 stays inside
        assert!(x[0].contains(0.5));
        assert!(x[0].hi >= (1.0f64 - 0.25).sqrt() - 1e-12);
    }

    #[test]
    fn multi_sweep_fixed_point() {
        let cs = vec![ip("1 - x1^2", 1), ip("x1", 1)];
        let mut x = vec![Interval::new(-5.0, 5.0)];
        let any = contract_all(&cs, &mut x, 4).unwrap();
        assert!(any);
        assert_eq!(x[0], Interval::new(0.0, 1.0));
    }

    #[test]
    fn no_false_emptiness_on_feasible_random_boxes() {
        // compare against exact rational feasibility at sampled points
        use crate::poly::ratio;
        let c = ip("1 - x1^2 - x2^2", 2);
        let exact = parse_polynomial("1 - x1^2 - x2^2", 2).unwrap();
        for a in -4..4 {
            for b in -4..4 {
                let mut x = vec![
                    Interval::new(a as f64 / 4.0, (a + 1) as f64 / 4.0),
                    Interval::new(b as f64 / 4.0, (b + 1) as f64 / 4.0),
                ];
                let had_feasible = (0..=4).any(|p| {
                    (0..=4).any(|q| {
                        let pt = [
                            ratio(4 * a as i64 + p, 16),
                            ratio(4 * b as i64 + q, 16),
                        ];
                        exact.evaluate(&pt).unwrap() >= num_traits::Zero::zero()
                    })
                });
                let out = contract_nonneg(&c, &mut x);
                if had_feasible {
                    assert_ne!(out, ContractOutcome::Empty, "box ({a},{b}) wrongly emptied");
                }
            }
        }
    }
}
