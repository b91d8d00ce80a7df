//! Sampled checks of function-class inequalities along geodesics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::set::ConvexSet;
use crate::error::{Error, Result};
use crate::manifold::{geodesic, Manifold};
use crate::objectives::Objective;

/// An objective together with its declared curvature constants.
#[derive(Debug, Clone)]
pub struct SmoothStronglyConvexFn<M: Manifold, O> {
    pub f: O,
    pub mu: f64,
    pub l: f64,
    pub fstar: Option<f64>,
    pub xstar: Option<M::Point>,
}

impl<M: Manifold, O: Objective<M>> SmoothStronglyConvexFn<M, O> {
    /// Checks `µ ≤ L` and, when `x*` is given, `‖∇f(x*)‖ ≤ 1e-8`.
    pub fn new(f: O, mu: f64, l: f64, fstar: Option<f64>, xstar: Option<M::Point>) -> Result<Self> {
        if !(mu <= l) {
            return Err(Error::Config(format!("need mu <= L, got mu = {mu}, L = {l}")));
        }
        if let Some(xs) = &xstar {
            let g = f.grad(xs)?;
            let gn = f.manifold().norm(xs, &g);
            if gn > 1e-8 {
                return Err(Error::Config(format!("gradient at x* has norm {gn}")));
            }
        }
        Ok(Self { f, mu, l, fstar, xstar })
    }
}

/// Worst margins of the two geodesic inequalities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FunctionCheck {
    /// `min (1−t)f(x) + t f(y) − (µ/2) t(1−t) d² − f(γ(t))`
    pub strong_convexity_margin: f64,
    /// `min (L/2) d² − |f(y) − f(x) − ⟨∇f(x), log_x y⟩|`
    pub smoothness_margin: f64,
}

impl FunctionCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.strong_convexity_margin >= -tol && self.smoothness_margin >= -tol
    }
}

fn sample<M: Manifold, S: ConvexSet<M>>(set: &S, boundary: bool, rng: &mut ChaCha8Rng) -> Result<M::Point> {
    if boundary {
        set.sample_boundary(rng)
    } else {
        Ok(set.sample_interior(rng))
    }
}

fn par_min<F>(n: usize, seed: u64, eval: F) -> f64
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            match eval(i, &mut rng) {
                Ok(v) if !v.is_nan() => v,
                _ => f64::NEG_INFINITY,
            }
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Gradient-norm bound `‖∇f(x)‖ ≤ √(2L(f(x) − f*))` on points of `set`.
/// Returns the worst margin `√(2L(f − f*)) − ‖∇f‖`.
pub fn check_smoothness_gradient_bound<M: Manifold, O: Objective<M>, S: ConvexSet<M>, R: Rng + ?Sized>(
    f: &SmoothStronglyConvexFn<M, O>,
    set: &S,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let fstar = f.fstar.ok_or_else(|| Error::Config("the gradient bound needs f*".into()))?;
    let m = set.manifold();
    let seed = rng.random();
    Ok(par_min(n_samples, seed, |i, rng| {
        let x = sample(set, i % 2 == 1, rng)?;
        let (v, g) = f.f.value_grad(&x)?;
        Ok((2.0 * f.l * (v - fstar).max(0.0)).sqrt() - m.norm(&x, &g))
    }))
}

/// Strong convexity with `µ` and smoothness with `L` along geodesics between
/// sampled points of `set`.
pub fn check_gconvexity_of_function<M: Manifold, O: Objective<M>, S: ConvexSet<M>, R: Rng + ?Sized>(
    f: &SmoothStronglyConvexFn<M, O>,
    set: &S,
    n_samples: usize,
    rng: &mut R,
) -> Result<FunctionCheck> {
    let m = set.manifold();
    let seed = rng.random();
    let pair = |i: usize, rng: &mut ChaCha8Rng| -> Result<(M::Point, M::Point, f64)> {
        let x = sample(set, i % 3 == 1, rng)?;
        let y = sample(set, i % 3 == 2, rng)?;
        let d = m.dist(&x, &y);
        Ok((x, y, d))
    };
    let strong_convexity_margin = par_min(n_samples, seed, |i, rng| {
        let (x, y, d) = pair(i, rng)?;
        let t: f64 = rng.random();
        let g = geodesic(m, &x, &y, t)?;
        Ok((1.0 - t) * f.f.value(&x) + t * f.f.value(&y) - 0.5 * f.mu * t * (1.0 - t) * d * d - f.f.value(&g))
    });
    let smoothness_margin = par_min(n_samples, seed, |i, rng| {
        let (x, y, d) = pair(i, rng)?;
        let (fx, gx) = f.f.value_grad(&x)?;
        let lin = f.f.value(&y) - fx - m.inner(&x, &gx, &m.log(&x, &y)?);
        Ok(0.5 * f.l * d * d - lin.abs())
    });
    Ok(FunctionCheck { strong_convexity_margin, smoothness_margin })
}
