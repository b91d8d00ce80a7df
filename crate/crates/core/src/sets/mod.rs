//! Feasible sets: geodesic balls with their linear oracles, plus the scalar
//! solvers the oracles are built on.

mod ball;
pub mod scalar;

pub use ball::{
    alpha_phi_sphere, exit_distance, lmo_constant_curvature_ball, lmo_euclidean_ball, lmo_sphere_ball,
    BallOracle, GeodesicBall, LmoResult,
};

use rand::Rng;

use crate::error::Result;
use crate::manifold::{normalize, orthogonalize, random_unit_tangent, Ambient, Manifold};

/// Reference oracle that scans `n_grid` equally spaced points of the boundary
/// circle `θ ↦ exp_{x₀}(r (cos θ e₁ + sin θ e₂))`, where `(e₁, e₂)` spans the
/// transported direction `w` and `log_{x₀} x`.
///
/// In constant curvature that circle contains an optimal vertex, so the scan
/// is an independent check of the plane-reduced oracles. `rng` is only used
/// to complete the basis when the two spanning vectors are parallel.
pub fn lmo_boundary_scan<M: Manifold, R: Rng + ?Sized>(
    ball: &GeodesicBall<M>,
    w: &M::Point,
    x: &M::Point,
    n_grid: usize,
    rng: &mut R,
) -> Result<LmoResult<M::Point>> {
    let m = ball.manifold();
    let x0 = ball.center();
    let w0 = m.transport(x, x0, w)?;
    let e1 = match normalize(m, x0, &w0) {
        Some(e) => e,
        None => random_unit_tangent(m, x0, rng),
    };
    let to_x = m.log(x0, x)?;
    let e2 = match normalize(m, x0, &orthogonalize(m, x0, &to_x, &e1)).filter(|_| m.norm(x0, &to_x) > 1e-13) {
        Some(e) => e,
        None => loop {
            let g = random_unit_tangent(m, x0, rng);
            if let Some(e) = normalize(m, x0, &orthogonalize(m, x0, &g, &e1)) {
                break e;
            }
        },
    };

    let mut best: Option<(f64, f64, M::Point)> = None;
    for k in 0..n_grid {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n_grid as f64;
        let dir = M::Point::lincomb(theta.cos() * ball.radius(), &e1, theta.sin() * ball.radius(), &e2);
        let z = m.exp(x0, &dir)?;
        let val = m.inner(x, w, &m.log(x, &z)?);
        if best.as_ref().is_none_or(|(b, _, _)| val > *b) {
            best = Some((val, theta, z));
        }
    }
    let (objective, phi, vertex) = best.expect("n_grid must be positive");
    Ok(LmoResult { vertex, objective, phi })
}
