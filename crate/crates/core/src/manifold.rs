//! The Riemannian manifold contract and the generic helpers built on it.
//!
//! Points and tangent vectors share one ambient representation per manifold
//! (a column vector for the sphere, hyperboloid and Euclidean space, a square
//! matrix for SPD). A tangent vector never carries its base point: every
//! operation that needs one takes it as an explicit argument, so a tangent
//! vector cannot be paired with the wrong base by construction.

use std::fmt::Debug;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear-space operations on the ambient representation.
pub trait Ambient: Clone + Debug + PartialEq + Send + Sync {
    fn zeros_like(&self) -> Self;

    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);

    fn scaled(&self, a: f64) -> Self;

    /// Flat Euclidean (Frobenius) inner product of the embedding.
    fn ambient_dot(&self, other: &Self) -> f64;

    fn as_slice(&self) -> &[f64];

    fn ambient_norm(&self) -> f64 {
        self.ambient_dot(self).sqrt()
    }

    /// `a * x + b * y`
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        let mut out = x.scaled(a);
        out.axpy(b, y);
        out
    }

    fn plus(&self, other: &Self) -> Self {
        Self::lincomb(1.0, self, 1.0, other)
    }

    fn minus(&self, other: &Self) -> Self {
        Self::lincomb(1.0, self, -1.0, other)
    }
}

impl Ambient for DVector<f64> {
    fn zeros_like(&self) -> Self {
        DVector::zeros(self.len())
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        nalgebra::Matrix::axpy(self, a, x, 1.0);
    }

    fn scaled(&self, a: f64) -> Self {
        self * a
    }

    fn ambient_dot(&self, other: &Self) -> f64 {
        self.dot(other)
    }

    fn as_slice(&self) -> &[f64] {
        nalgebra::Matrix::as_slice(self)
    }
}

impl Ambient for DMatrix<f64> {
    fn zeros_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        *self += x * a;
    }

    fn scaled(&self, a: f64) -> Self {
        self * a
    }

    fn ambient_dot(&self, other: &Self) -> f64 {
        self.dot(other)
    }

    fn as_slice(&self) -> &[f64] {
        nalgebra::Matrix::as_slice(self)
    }
}

/// Sectional curvature bounds and the bound on the covariant derivative of
/// the curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureInfo {
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// Bound `F` on `‖∇R‖`; zero on locally symmetric spaces.
    pub nabla_r_bound: f64,
}

impl CurvatureInfo {
    pub fn new(kappa_min: f64, kappa_max: f64, nabla_r_bound: f64) -> Result<Self> {
        if !(kappa_min <= kappa_max) || !(nabla_r_bound >= 0.0) {
            return Err(Error::Config(format!(
                "invalid curvature bounds [{kappa_min}, {kappa_max}], F = {nabla_r_bound}"
            )));
        }
        Ok(Self { kappa_min, kappa_max, nabla_r_bound })
    }

    pub fn constant(kappa: f64) -> Self {
        Self { kappa_min: kappa, kappa_max: kappa, nabla_r_bound: 0.0 }
    }

    /// `K = max{|κ_min|, κ_max}`
    pub fn k(&self) -> f64 {
        self.kappa_min.abs().max(self.kappa_max)
    }

    pub fn is_constant(&self) -> bool {
        self.kappa_min == self.kappa_max
    }
}

/// Geometric primitives of one concrete Riemannian manifold.
///
/// Implementations are stateless: every method is a pure function of its
/// arguments, so a manifold can be shared freely between threads.
pub trait Manifold: Send + Sync {
    type Point: Ambient;

    fn name(&self) -> &'static str;

    /// Intrinsic dimension.
    fn dimension(&self) -> usize;

    fn curvature(&self) -> CurvatureInfo;

    /// Riemannian metric `⟨u, v⟩_x`.
    fn inner(&self, x: &Self::Point, u: &Self::Point, v: &Self::Point) -> f64;

    fn norm(&self, x: &Self::Point, u: &Self::Point) -> f64 {
        self.inner(x, u, u).max(0.0).sqrt()
    }

    fn exp(&self, x: &Self::Point, v: &Self::Point) -> Result<Self::Point>;

    /// Inverse of `exp` restricted to minimizing geodesics.
    fn log(&self, x: &Self::Point, y: &Self::Point) -> Result<Self::Point>;

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// Parallel transport of `u ∈ T_x` to `T_y` along the minimizing geodesic.
    fn transport(&self, x: &Self::Point, y: &Self::Point, u: &Self::Point) -> Result<Self::Point>;

    /// Orthogonal projection of an ambient vector onto `T_x`.
    fn project_tangent(&self, x: &Self::Point, a: &Self::Point) -> Self::Point;

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    /// Standard Gaussian vector of `T_x` with respect to the metric at `x`.
    fn random_tangent<R: Rng + ?Sized>(&self, x: &Self::Point, rng: &mut R) -> Self::Point;

    /// Violation of the embedding constraint (zero for a valid point).
    fn embedding_residual(&self, x: &Self::Point) -> f64;

    /// Violation of the tangency constraint of `v` at `x`.
    fn tangent_residual(&self, x: &Self::Point, v: &Self::Point) -> f64;

    /// Radius of the ball in `T_x` on which `exp` is a diffeomorphism.
    fn injectivity_radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// Point at time `t` of the minimizing geodesic from `x` to `y`.
pub fn geodesic<M: Manifold>(m: &M, x: &M::Point, y: &M::Point, t: f64) -> Result<M::Point> {
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t == 1.0 {
        return Ok(y.clone());
    }
    let v = m.log(x, y)?;
    m.exp(x, &v.scaled(t))
}

/// Rescales a tangent vector to unit length, or `None` for a (numerically)
/// zero vector.
pub fn normalize<M: Manifold>(m: &M, x: &M::Point, u: &M::Point) -> Option<M::Point> {
    let n = m.norm(x, u);
    (n > 1e-300 && n.is_finite()).then(|| u.scaled(1.0 / n))
}

/// Uniformly distributed unit tangent vector at `x`.
pub fn random_unit_tangent<M: Manifold, R: Rng + ?Sized>(
    m: &M,
    x: &M::Point,
    rng: &mut R,
) -> M::Point {
    loop {
        let g = m.random_tangent(x, rng);
        if let Some(u) = normalize(m, x, &g) {
            return u;
        }
    }
}

/// Removes from `u` its component along the unit vector `e` (metric at `x`).
pub fn orthogonalize<M: Manifold>(m: &M, x: &M::Point, u: &M::Point, e: &M::Point) -> M::Point {
    let mut out = u.clone();
    out.axpy(-m.inner(x, e, u), e);
    out
}

/// The log-pullback of a point set: `y ↦ log_x(y)`.
pub fn pullback<M: Manifold>(m: &M, x: &M::Point, ys: &[M::Point]) -> Result<Vec<M::Point>> {
    ys.iter().map(|y| m.log(x, y)).collect()
}
