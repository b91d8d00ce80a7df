//! Objective functions with Riemannian gradients.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::manifold::{Ambient, Manifold};
use crate::manifolds::{Euclidean, Sphere};
use crate::sets::GeodesicBall;

/// A differentiable function on a manifold.
pub trait Objective<M: Manifold>: Send + Sync {
    fn manifold(&self) -> &M;

    fn value(&self, x: &M::Point) -> f64;

    /// Riemannian gradient at `x`.
    fn grad(&self, x: &M::Point) -> Result<M::Point>;

    fn value_grad(&self, x: &M::Point) -> Result<(f64, M::Point)> {
        Ok((self.value(x), self.grad(x)?))
    }
}

/// `½ (x − x*)ᵀ A (x − x*)` restricted to a manifold embedded in `ℝⁿ`, with
/// `A` symmetric positive semidefinite of spectral norm 1.
#[derive(Debug, Clone)]
pub struct QuadraticOnEmbedded<M> {
    manifold: M,
    matrix: DMatrix<f64>,
    target: DVector<f64>,
    /// Spectral norm of the matrix before normalization.
    scale: f64,
    lambda_min: f64,
    lambda_max: f64,
}

impl<M: Manifold<Point = DVector<f64>>> QuadraticOnEmbedded<M> {
    /// Normalizes `a` by its spectral norm.
    pub fn new(manifold: M, a: DMatrix<f64>, target: DVector<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() != target.len() {
            return Err(Error::Config(format!(
                "matrix is {}x{} but the target has length {}",
                a.nrows(),
                a.ncols(),
                target.len()
            )));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > 1e-10 * a.amax().max(1.0) {
            return Err(Error::Config(format!("matrix is not symmetric (max asymmetry {asym})")));
        }
        let eig = SymmetricEigen::new(a.clone()).eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        if lo < -1e-10 * hi.abs().max(1.0) {
            return Err(Error::Config(format!("matrix is not positive semidefinite (eigenvalue {lo})")));
        }
        if !(hi > 0.0) {
            return Err(Error::Config("matrix must be non-zero".into()));
        }
        Ok(Self {
            manifold,
            matrix: a / hi,
            target,
            scale: hi,
            lambda_min: lo.max(0.0) / hi,
            lambda_max: 1.0,
        })
    }

    /// `A = BᵀB / ‖BᵀB‖₂`.
    pub fn from_gram(manifold: M, b: &DMatrix<f64>, target: DVector<f64>) -> Result<Self> {
        let g = b.transpose() * b;
        Self::new(manifold, (&g + g.transpose()) * 0.5, target)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Extreme eigenvalues `(λ_min, λ_max)` of the normalized matrix.
    pub fn spectrum(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    /// The smoothness constant used by the solver: `‖A‖₂ = 1`.
    pub fn smoothness(&self) -> f64 {
        self.lambda_max
    }
}

impl<M: Manifold<Point = DVector<f64>>> Objective<M> for QuadraticOnEmbedded<M> {
    fn manifold(&self) -> &M {
        &self.manifold
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        let r = x - &self.target;
        0.5 * r.dot(&(&self.matrix * &r))
    }

    fn grad(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let r = x - &self.target;
        Ok(self.manifold.project_tangent(x, &(&self.matrix * r)))
    }

    fn value_grad(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        let r = x - &self.target;
        let ar = &self.matrix * &r;
        Ok((0.5 * r.dot(&ar), self.manifold.project_tangent(x, &ar)))
    }
}

impl QuadraticOnEmbedded<Euclidean> {
    /// Geodesic strong-convexity and smoothness constants `(λ_min, λ_max)`.
    pub fn geodesic_constants(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }
}

/// `max_{z ∈ B(x₀, r)} bᵀz` over a spherical cap.
fn cap_linear_max(b: &DVector<f64>, x0: &DVector<f64>, r: f64) -> f64 {
    let bn = b.dot(x0);
    let bt = (b - x0 * bn).norm();
    let theta = bt.atan2(bn);
    if theta <= r {
        b.norm()
    } else {
        bn * r.cos() + bt * r.sin()
    }
}

impl QuadraticOnEmbedded<Sphere> {
    /// Constants `(µ, L)` bounding the second derivative of `f` along unit
    /// speed geodesics inside `ball`.
    ///
    /// Along a unit-speed great circle `f'' = γ̇ᵀAγ̇ − γᵀAγ + (Ax*)ᵀγ`, so
    /// `µ = λ_min − λ_max + min (Ax*)ᵀγ` and `L = λ_max − λ_min + max (Ax*)ᵀγ`
    /// with the extrema of the linear term taken over the cap. `µ` may be
    /// negative: the quadratic is then only weakly convex on the ball.
    pub fn geodesic_constants_on(&self, ball: &GeodesicBall<Sphere>) -> (f64, f64) {
        let b = &self.matrix * &self.target;
        let hi = cap_linear_max(&b, ball.center(), ball.radius());
        let lo = -cap_linear_max(&(-&b), ball.center(), ball.radius());
        let spread = self.lambda_max - self.lambda_min;
        (lo - spread, hi + spread)
    }

    /// Smoothness constant valid on the whole sphere:
    /// `λ_max − λ_min + ‖Ax*‖`.
    pub fn global_geodesic_smoothness(&self) -> f64 {
        self.lambda_max - self.lambda_min + (&self.matrix * &self.target).norm()
    }
}

/// Random point `x*` of the sphere with `d(x*, center) ≤ max_dist`, by
/// rejection from the uniform distribution.
pub fn sample_target_near<R: Rng + ?Sized>(
    sphere: &Sphere,
    center: &DVector<f64>,
    max_dist: f64,
    rng: &mut R,
) -> Result<DVector<f64>> {
    if !(max_dist > 0.0) {
        return Err(Error::Config(format!("max_dist must be positive, got {max_dist}")));
    }
    for _ in 0..1_000_000 {
        let x = sphere.random_point(rng);
        if sphere.dist(&x, center) <= max_dist {
            return Ok(x);
        }
    }
    Err(Error::Numeric(format!("rejection sampling found no point within {max_dist}")))
}

/// `½ d(x, x₀)²`, with gradient `−log_x(x₀)`.
#[derive(Debug, Clone)]
pub struct SquaredDistanceObjective<M: Manifold> {
    manifold: M,
    anchor: M::Point,
}

impl<M: Manifold> SquaredDistanceObjective<M> {
    pub fn new(manifold: M, anchor: M::Point) -> Self {
        Self { manifold, anchor }
    }

    pub fn anchor(&self) -> &M::Point {
        &self.anchor
    }
}

impl<M: Manifold> Objective<M> for SquaredDistanceObjective<M> {
    fn manifold(&self) -> &M {
        &self.manifold
    }

    fn value(&self, x: &M::Point) -> f64 {
        let d = self.manifold.dist(x, &self.anchor);
        0.5 * d * d
    }

    fn grad(&self, x: &M::Point) -> Result<M::Point> {
        Ok(self.manifold.log(x, &self.anchor)?.scaled(-1.0))
    }
}
