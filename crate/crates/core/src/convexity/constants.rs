//! Curvature constants of half the squared distance and the radius and
//! strong-convexity constants derived from them.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::manifold::CurvatureInfo;

/// Smoothness constant of `½ d(·, x₀)²` on a ball of radius `r`:
/// `r√|κ| coth(r√|κ|)` for `κ_min < 0`, and 1 otherwise (including the
/// limit at `κ_min = 0`).
pub fn zeta(r: f64, kmin: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Contract(format!("zeta needs r > 0, got {r}")));
    }
    if kmin >= 0.0 {
        return Ok(1.0);
    }
    let a = r * (-kmin).sqrt();
    Ok(a / a.tanh())
}

/// Strong-convexity constant of `½ d(·, x₀)²` on a ball of radius `r`:
/// 1 for `κ_max ≤ 0`, `r√κ cot(r√κ)` otherwise.
pub fn delta(r: f64, kmax: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Contract(format!("delta needs r > 0, got {r}")));
    }
    if kmax <= 0.0 {
        return Ok(1.0);
    }
    let a = r * kmax.sqrt();
    if a >= FRAC_PI_2 {
        return Err(Error::Domain(format!("delta needs r sqrt(kmax) < pi/2, got {a}")));
    }
    Ok(a / a.tan())
}

/// Right-hand side `½ (δ_r/ζ_r) min{1/(4K), K/(4F)}` of the radius condition
/// for Riemannian strong convexity of balls, evaluated at `r`. Flat spaces
/// give `+∞`; `F = 0` drops the second term.
pub fn riemannian_strong_convexity_radius(curv: &CurvatureInfo, r: f64) -> Result<f64> {
    let k = curv.k();
    if k == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut m = 1.0 / (4.0 * k);
    if curv.nabla_r_bound > 0.0 {
        m = m.min(k / (4.0 * curv.nabla_r_bound));
    }
    Ok(0.5 * delta(r, curv.kappa_max)? / zeta(r, curv.kappa_min)? * m)
}

/// Self-consistent radius: iterates `r ← bound(r)` from `r₀ = 1/(8K)` until
/// the relative change drops below `1e-10`.
pub fn riemannian_strong_convexity_fixed_point(curv: &CurvatureInfo) -> Result<f64> {
    let k = curv.k();
    if k == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut r = 1.0 / (8.0 * k);
    for _ in 0..1000 {
        let next = riemannian_strong_convexity_radius(curv, r)?;
        if (next - r).abs() <= 1e-10 * r {
            return Ok(next);
        }
        r = next;
    }
    Err(Error::Numeric("radius fixed point did not converge".into()))
}

/// Strong-convexity constant of the sublevel set `{f − f* ≤ s}` of a
/// `µ`-strongly convex, `L`-smooth function: `µ / (2 √(2 s L max{ℓ⁻², 1}))`.
pub fn levelset_alpha(mu: f64, l: f64, s: f64, ell: f64) -> Result<f64> {
    if !(mu > 0.0 && l > 0.0 && s > 0.0 && ell > 0.0) {
        return Err(Error::Contract(format!(
            "levelset_alpha needs positive inputs, got mu={mu}, L={l}, s={s}, ell={ell}"
        )));
    }
    if mu > l {
        return Err(Error::Contract(format!("levelset_alpha needs mu <= L, got {mu} > {l}")));
    }
    Ok(mu / (2.0 * (2.0 * s * l * (1.0 / (ell * ell)).max(1.0)).sqrt()))
}

/// Riemannian strong-convexity constant of a ball of radius `r` that meets
/// the radius condition: the sublevel-set constant of the tangent-space
/// pullback of `½ d(·, x₀)²`, which is `δ_r/2`-strongly convex and
/// `3ζ_r/2`-smooth there, at level `s = r²/2`.
pub fn riemannian_ball_alpha(curv: &CurvatureInfo, r: f64) -> Result<f64> {
    let bound = riemannian_strong_convexity_radius(curv, r)?;
    if r > bound * (1.0 + 1e-9) {
        return Err(Error::Domain(format!("radius {r} exceeds the admissible {bound}")));
    }
    let mu = delta(r, curv.kappa_max)? / 2.0;
    let l = 1.5 * zeta(r, curv.kappa_min)?;
    levelset_alpha(mu, l, r * r / 2.0, 1.0)
}

/// Geodesic strong-convexity constant of a ball of radius `r`, viewed as the
/// sublevel set `{½ d(·, x₀)² ≤ r²/2}` with `µ = δ_r`, `L = ζ_r`, `ℓ = 1`.
pub fn sublevel_ball_alpha(curv: &CurvatureInfo, r: f64) -> Result<f64> {
    levelset_alpha(delta(r, curv.kappa_max)?, zeta(r, curv.kappa_min)?, r * r / 2.0, 1.0)
}
