//! Geodesic balls and their linear oracles.
//!
//! In constant curvature the maximizer of `z ↦ ⟨w, log_x z⟩` over a ball
//! `B(x₀, r)` lies on the boundary, inside the surface swept by geodesics
//! from `x` with initial velocity in `span{log_x x₀, w}`. Parametrizing that
//! plane by `p(φ) = cos φ u₁ + sin φ u₂` reduces the oracle to maximizing
//! `α(φ) ‖w‖ cos φ`, where `α(φ)` is the distance travelled along `p(φ)`
//! before leaving the ball.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use super::scalar::{bisect_root, minimize_1d, DEFAULT_TOL};
use crate::convexity::set::{ConvexSet, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::manifold::{normalize, orthogonalize, random_unit_tangent, Ambient, Manifold};
use crate::manifolds::{Euclidean, Hyperboloid, Spd, Sphere};

/// `u₂` is considered degenerate (the plane collapses to a line) below this norm.
const DEGENERATE_PLANE: f64 = 1e-13;

/// Closed ball `{x : d(x₀, x) ≤ r}`.
#[derive(Debug, Clone)]
pub struct GeodesicBall<M: Manifold> {
    manifold: M,
    center: M::Point,
    radius: f64,
}

/// Output of a ball oracle.
#[derive(Debug, Clone, Serialize)]
pub struct LmoResult<P> {
    pub vertex: P,
    /// `⟨w, log_x v⟩`
    pub objective: f64,
    /// Angle of the maximizing direction in the `(u₁, u₂)` plane; zero in the
    /// degenerate one-dimensional case.
    pub phi: f64,
}

impl<M: Manifold> GeodesicBall<M> {
    pub fn new(manifold: M, center: M::Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!("ball radius must be positive, got {radius}")));
        }
        let res = manifold.embedding_residual(&center);
        if !(res <= 1e-8) {
            return Err(Error::Config(format!("ball center is not on the manifold (residual {res})")));
        }
        let kmax = manifold.curvature().kappa_max;
        if kmax > 0.0 && radius >= PI / (2.0 * kmax.sqrt()) {
            return Err(Error::Config(format!(
                "radius {radius} is not below pi/(2 sqrt(K)) = {}",
                PI / (2.0 * kmax.sqrt())
            )));
        }
        Ok(Self { manifold, center, radius })
    }

    pub fn manifold(&self) -> &M {
        &self.manifold
    }

    pub fn center(&self) -> &M::Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Membership with the `1e-9` distance tolerance.
    pub fn contains(&self, x: &M::Point) -> bool {
        self.manifold.dist(&self.center, x) <= self.radius + MEMBERSHIP_TOL
    }

    fn check_query(&self, w: &M::Point, x: &M::Point) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::Contract(format!(
                "oracle query point lies outside the ball (dist {} > {})",
                self.manifold.dist(&self.center, x),
                self.radius
            )));
        }
        let wn = self.manifold.norm(x, w);
        if !(wn > 0.0) || !wn.is_finite() {
            return Err(Error::Contract(format!("oracle direction must be non-zero, |w| = {wn}")));
        }
        Ok(wn)
    }

    /// `⟨w, log_x v⟩`
    pub fn oracle_objective(&self, w: &M::Point, x: &M::Point, v: &M::Point) -> Result<f64> {
        Ok(self.manifold.inner(x, w, &self.manifold.log(x, v)?))
    }
}

/// The orthonormal pair `(u₁, u₂)` of the oracle plane, or `(u₁, None)` when
/// `log_x x₀` is parallel to `w` (including `x = x₀`).
fn oracle_plane<M: Manifold>(ball: &GeodesicBall<M>, w: &M::Point, x: &M::Point, wn: f64) -> Result<(M::Point, Option<M::Point>)> {
    let m = &ball.manifold;
    let u1 = w.scaled(1.0 / wn);
    let to_center = m.log(x, &ball.center)?;
    let u2 = orthogonalize(m, x, &to_center, &u1);
    if m.norm(x, &u2) > DEGENERATE_PLANE {
        Ok((u1, normalize(m, x, &u2)))
    } else {
        Ok((u1, None))
    }
}

/// Maximizes `α(φ) cos φ` over `φ ∈ [−π, π]` from three overlapping brackets.
fn best_angle(mut alpha: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut failure = None;
    let mut objective = |phi: f64| match alpha(phi) {
        Ok(a) => -a * phi.cos(),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let mut best: Option<(f64, f64)> = None;
    for (lo, hi) in [(-PI, 0.0), (-PI / 2.0, PI / 2.0), (0.0, PI)] {
        let (phi, val) = match minimize_1d(&mut objective, lo, hi, DEFAULT_TOL) {
            Ok(r) => r,
            Err(_) => break,
        };
        if best.is_none_or(|(_, b)| val < b) {
            best = Some((phi, val));
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    best.map(|(phi, _)| phi).ok_or_else(|| Error::Numeric("angle search failed".into()))
}

/// Smallest non-negative `α` with `a cos α + b sin α = c`, through the
/// half-angle closed form `α = 2 atan((b + √(a² + b² − c²)) / (a + c))`.
pub fn alpha_phi_sphere(a: f64, b: f64, c: f64) -> Result<f64> {
    let disc = a * a + b * b - c * c;
    let scale = (a * a + b * b + c * c).max(1.0);
    if disc < -1e-14 * scale {
        return Err(Error::NoIntersection(disc));
    }
    if (a + c).abs() < 1e-14 * scale.sqrt() {
        return Err(Error::Branch(a + c));
    }
    let mut alpha = 2.0 * ((b + disc.max(0.0).sqrt()) / (a + c)).atan();
    if alpha < 0.0 {
        // A slightly negative root is the boundary start point itself.
        alpha = if alpha > -1e-12 { 0.0 } else { alpha + 2.0 * PI };
    }
    Ok(alpha)
}

/// Sphere ball oracle using the closed-form `α(φ)`:
/// `a = x₀ᵀx`, `b(φ) = x₀ᵀp(φ)`, `c = cos r = 1 − 2 sin²(r/2)`.
pub fn lmo_sphere_ball(w: &DVector<f64>, x: &DVector<f64>, ball: &GeodesicBall<Sphere>) -> Result<LmoResult<DVector<f64>>> {
    let wn = ball.check_query(w, x)?;
    let m = &ball.manifold;
    let x0 = &ball.center;
    let a = x0.dot(x);
    let c = 1.0 - 2.0 * (ball.radius / 2.0).sin().powi(2);
    // When the closed form hits its singular branch, solve the same equation
    // by bisection instead.
    let alpha_of = |b: f64| -> Result<f64> {
        match alpha_phi_sphere(a, b, c) {
            Err(Error::Branch(_)) => {
                bisect_root(|s| a * s.cos() + b * s.sin() - c, 0.0, PI, DEFAULT_TOL)
            }
            other => other,
        }
    };

    let (u1, u2) = oracle_plane(ball, w, x, wn)?;
    let (vertex, phi) = match u2 {
        Some(u2) => {
            let (b1, b2) = (x0.dot(&u1), x0.dot(&u2));
            let phi = best_angle(|phi| alpha_of(phi.cos() * b1 + phi.sin() * b2))?;
            let p = &u1 * phi.cos() + &u2 * phi.sin();
            let alpha = alpha_of(x0.dot(&p))?;
            (m.exp(x, &(p * alpha))?, phi)
        }
        None => {
            let alpha = alpha_of(x0.dot(&u1))?;
            (m.exp(x, &(&u1 * alpha))?, 0.0)
        }
    };
    let objective = ball.oracle_objective(w, x, &vertex)?;
    Ok(LmoResult { vertex, objective, phi })
}

/// Distance travelled from `x` along the unit direction `p` before leaving
/// the ball, by bisection on `d(exp_x(α p), x₀) − r` over `[0, d(x, x₀) + r]`.
pub fn exit_distance<M: Manifold>(ball: &GeodesicBall<M>, x: &M::Point, p: &M::Point) -> Result<f64> {
    let m = &ball.manifold;
    let g = |alpha: f64| match m.exp(x, &p.scaled(alpha)) {
        Ok(y) => m.dist(&y, &ball.center) - ball.radius,
        Err(_) => f64::NAN,
    };
    // The triangle-inequality bound is attained exactly from the center, so
    // widen it slightly to keep a sign change under roundoff.
    let mut hi = m.dist(x, &ball.center) + ball.radius;
    for _ in 0..4 {
        if g(hi) > 0.0 {
            break;
        }
        hi *= 1.0 + 1e-6;
    }
    let g0 = g(0.0);
    if g0 >= 0.0 {
        // Query point on the boundary: the exit distance is zero when p
        // points outwards.
        let eps = 1e-9 * ball.radius;
        if g(eps) > g0 {
            return Ok(0.0);
        }
        return bisect_root(g, eps, hi, DEFAULT_TOL);
    }
    bisect_root(g, 0.0, hi, DEFAULT_TOL)
}

/// Ball oracle for any constant-curvature manifold, with `α(φ)` obtained by
/// bisection.
pub fn lmo_constant_curvature_ball<M: Manifold>(w: &M::Point, x: &M::Point, ball: &GeodesicBall<M>) -> Result<LmoResult<M::Point>> {
    let wn = ball.check_query(w, x)?;
    let m = &ball.manifold;
    let (u1, u2) = oracle_plane(ball, w, x, wn)?;
    let (vertex, phi) = match u2 {
        Some(u2) => {
            let dir = |phi: f64| M::Point::lincomb(phi.cos(), &u1, phi.sin(), &u2);
            let phi = best_angle(|phi| exit_distance(ball, x, &dir(phi)))?;
            let p = dir(phi);
            let alpha = exit_distance(ball, x, &p)?;
            (m.exp(x, &p.scaled(alpha))?, phi)
        }
        None => {
            let alpha = exit_distance(ball, x, &u1)?;
            (m.exp(x, &u1.scaled(alpha))?, 0.0)
        }
    };
    let objective = ball.oracle_objective(w, x, &vertex)?;
    Ok(LmoResult { vertex, objective, phi })
}

/// Exact Euclidean ball oracle: `x₀ + r w / ‖w‖`.
pub fn lmo_euclidean_ball(w: &DVector<f64>, x: &DVector<f64>, ball: &GeodesicBall<Euclidean>) -> Result<LmoResult<DVector<f64>>> {
    let wn = ball.check_query(w, x)?;
    let vertex = &ball.center + w * (ball.radius / wn);
    let objective = w.dot(&(&vertex - x));
    Ok(LmoResult { vertex, objective, phi: 0.0 })
}

/// Picks the oracle used by [`GeodesicBall`]'s [`ConvexSet`] implementation.
pub trait BallOracle: Manifold + Sized {
    fn ball_lmo(ball: &GeodesicBall<Self>, w: &Self::Point, x: &Self::Point) -> Result<LmoResult<Self::Point>>;
}

impl BallOracle for Sphere {
    fn ball_lmo(ball: &GeodesicBall<Self>, w: &DVector<f64>, x: &DVector<f64>) -> Result<LmoResult<DVector<f64>>> {
        lmo_sphere_ball(w, x, ball)
    }
}

impl BallOracle for Euclidean {
    fn ball_lmo(ball: &GeodesicBall<Self>, w: &DVector<f64>, x: &DVector<f64>) -> Result<LmoResult<DVector<f64>>> {
        lmo_euclidean_ball(w, x, ball)
    }
}

impl BallOracle for Hyperboloid {
    fn ball_lmo(ball: &GeodesicBall<Self>, w: &DVector<f64>, x: &DVector<f64>) -> Result<LmoResult<DVector<f64>>> {
        lmo_constant_curvature_ball(w, x, ball)
    }
}

/// Not constant curvature: the plane reduction is a heuristic here and the
/// result carries no optimality guarantee.
impl BallOracle for Spd {
    fn ball_lmo(ball: &GeodesicBall<Self>, w: &Self::Point, x: &Self::Point) -> Result<LmoResult<Self::Point>> {
        lmo_constant_curvature_ball(w, x, ball)
    }
}

impl<M: BallOracle> ConvexSet<M> for GeodesicBall<M> {
    fn manifold(&self) -> &M {
        &self.manifold
    }

    fn slack(&self, x: &M::Point) -> f64 {
        self.radius - self.manifold.dist(&self.center, x)
    }

    fn anchor(&self) -> &M::Point {
        &self.center
    }

    fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> M::Point {
        let m = &self.manifold;
        let u = random_unit_tangent(m, &self.center, rng);
        let dim = m.dimension() as f64;
        let s = self.radius * rng.random::<f64>().powf(1.0 / dim);
        m.exp(&self.center, &u.scaled(s)).expect("radius is inside the exp domain")
    }

    fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<M::Point> {
        let m = &self.manifold;
        let u = random_unit_tangent(m, &self.center, rng);
        m.exp(&self.center, &u.scaled(self.radius))
    }

    fn outward_normal(&self, x: &M::Point) -> Option<M::Point> {
        let m = &self.manifold;
        let inward = m.log(x, &self.center).ok()?;
        normalize(m, x, &inward).map(|u| u.scaled(-1.0))
    }

    fn has_lmo(&self) -> bool {
        true
    }

    fn lmo(&self, w: &M::Point, x: &M::Point) -> Result<M::Point> {
        M::ball_lmo(self, w, x).map(|r| r.vertex)
    }
}
