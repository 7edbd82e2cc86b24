//! Membership raster: exact per-iterate membership flags on a regular grid,
//! exported as CSV for external plotting of the nested iterates.

use num_rational::BigRational;

use mpi_core::engine::{Iterate, MpiResult};
use mpi_core::interval::{BoxRegion, Interval};
use mpi_core::rat;

use crate::error::{CliError, Result};

/// One grid row: the node coordinates and a membership flag per iterate
/// k = 0..=k_final. Flags are nonincreasing along k by construction of the
/// recursion.
#[derive(Debug, Clone)]
pub struct RasterRow {
    pub point: [f64; 2],
    pub flags: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct Raster {
    pub k_final: u32,
    pub rows: Vec<RasterRow>,
}

/// Evaluates exact membership of every iterate at each node of a
/// `resolution × resolution` lattice over `window`. Rows are emitted
/// row-major (x1 outer, x2 inner), deterministically.
pub fn rasterize(result: &MpiResult, window: &BoxRegion, resolution: u32) -> Result<Raster> {
    if window.dim() != 2 {
        return Err(CliError::InvalidInput(
            "raster output supports 2-dimensional problems only".into(),
        ));
    }
    if resolution < 2 {
        return Err(CliError::InvalidInput("raster resolution must be >= 2".into()));
    }
    let k_final = result.k_final;
    let axis = |d: usize| -> Vec<BigRational> {
        let (lo, hi) = (&window.bounds()[d].0, &window.bounds()[d].1);
        let step = (hi - lo) / rat(i64::from(resolution) - 1);
        (0..resolution)
            .map(|j| lo + &step * rat(i64::from(j)))
            .collect()
    };
    let xs = axis(0);
    let ys = axis(1);
    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            let point = [x.clone(), y.clone()];
            let flags = membership_flags(&result.iterates, &point)?;
            rows.push(RasterRow {
                point: [
                    Interval::from_rational(x).hi,
                    Interval::from_rational(y).hi,
                ],
                flags,
            });
        }
    }
    Ok(Raster { k_final, rows })
}

/// Membership of X0..Xk_final at one exact rational point. Nesting of the
/// iterates makes the flags monotone; once one turns false the rest are
/// skipped.
fn membership_flags(iterates: &[Iterate], point: &[BigRational]) -> Result<Vec<bool>> {
    let mut flags = Vec::with_capacity(iterates.len());
    let mut ok = true;
    for it in iterates {
        if ok {
            ok = match it {
                Iterate::Explicit(s) => s.contains(point)?,
                Iterate::Implicit(c) => c.contains(point)?,
            };
        }
        flags.push(ok);
    }
    Ok(flags)
}

/// Comma-delimited text with a one-line header: coordinates, then one
/// membership column per iterate.
pub fn to_csv(raster: &Raster) -> String {
    let mut out = String::new();
    out.push_str("x1,x2");
    for k in 0..=raster.k_final {
        out.push_str(&format!(",in_X{k}"));
    }
    out.push('\n');
    for row in &raster.rows {
        out.push_str(&format!("{:?},{:?}", row.point[0], row.point[1]));
        for &f in &row.flags {
            out.push_str(if f { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}
