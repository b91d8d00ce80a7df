//! Scalar solvers used by the ball oracles: golden-section minimization and
//! bisection root finding.

use crate::error::{Error, Result};

/// Default parameter tolerance of both solvers.
pub const DEFAULT_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const MAX_ITER: usize = 400;

fn finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric(format!("objective is not finite at {at}: {v}")))
    }
}

/// Golden-section search for a minimizer of `f` on `[lo, hi]`.
///
/// Returns `(argmin, min)`. The endpoints are evaluated as well, so a
/// monotone `f` yields the better endpoint. For unimodal `f` the argmin is
/// within `tol` of the true minimizer.
pub fn minimize_1d(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::Contract(format!("minimize_1d needs lo < hi, got [{lo}, {hi}]")));
    }
    let mut best = (lo, finite(f(lo), lo)?);
    let f_hi = finite(f(hi), hi)?;
    if f_hi < best.1 {
        best = (hi, f_hi);
    }

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = finite(f(c), c)?;
    let mut fd = finite(f(d), d)?;
    let mut iter = 0;
    while b - a > tol && iter < MAX_ITER {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = finite(f(c), c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = finite(f(d), d)?;
        }
        iter += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Bisection for a root of `g` on a sign-changing bracket `[lo, hi]`.
pub fn bisect_root(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::Contract(format!("bisect_root needs lo <= hi, got [{lo}, {hi}]")));
    }
    let g_lo = finite(g(lo), lo)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    let g_hi = finite(g(hi), hi)?;
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracket { lo, hi, g_lo, g_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let lo_negative = g_lo < 0.0;
    let mut iter = 0;
    while b - a > tol && iter < MAX_ITER {
        let mid = 0.5 * (a + b);
        let gm = finite(g(mid), mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
        iter += 1;
    }
    Ok(0.5 * (a + b))
}
