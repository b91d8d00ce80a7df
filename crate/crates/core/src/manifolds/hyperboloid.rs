use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_dim, sinhc, TINY};
use crate::error::Result;
use crate::manifold::{CurvatureInfo, Manifold};

/// Hyperboloid model of curvature −1:
/// `{x ∈ ℝⁿ⁺¹ : ⟨x, x⟩_M = −1, x₀ > 0}` with `⟨a, b⟩_M = −a₀b₀ + Σ aᵢbᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hyperboloid {
    n: usize,
}

/// Minkowski product with signature (−, +, …, +).
pub fn minkowski(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(b) - 2.0 * a[0] * b[0]
}

impl Hyperboloid {
    /// `n` is the intrinsic dimension; points live in `ℝⁿ⁺¹`.
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n, "hyperboloid")?;
        Ok(Self { n })
    }

    /// The apex `(1, 0, …, 0)`.
    pub fn apex(&self) -> DVector<f64> {
        let mut x = DVector::zeros(self.n + 1);
        x[0] = 1.0;
        x
    }

    fn renormalize(&self, mut y: DVector<f64>) -> DVector<f64> {
        let q = -minkowski(&y, &y);
        if q > 0.0 {
            y /= q.sqrt();
        }
        if y[0] < 0.0 {
            y = -y;
        }
        y
    }
}

impl Manifold for Hyperboloid {
    type Point = DVector<f64>;

    fn name(&self) -> &'static str {
        "hyperboloid"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn curvature(&self) -> CurvatureInfo {
        CurvatureInfo::constant(-1.0)
    }

    fn inner(&self, _x: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        minkowski(u, v)
    }

    fn exp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        let theta = minkowski(v, v).max(0.0).sqrt();
        Ok(self.renormalize(x * theta.cosh() + v * sinhc(theta)))
    }

    fn log(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        let d = self.dist(x, y);
        let p = self.project_tangent(x, y);
        let s = minkowski(&p, &p).max(0.0).sqrt();
        if s < TINY * TINY {
            return Ok(DVector::zeros(self.n + 1));
        }
        Ok(p * (d / s))
    }

    fn dist(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        // ⟨y−x, y−x⟩_M = 4 sinh²(d/2), well conditioned for close points.
        let w = y - x;
        2.0 * (minkowski(&w, &w).max(0.0).sqrt() / 2.0).asinh()
    }

    fn transport(&self, x: &DVector<f64>, y: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
        let d = self.dist(x, y);
        if d < TINY * TINY {
            return Ok(self.project_tangent(y, u));
        }
        let v = self.log(x, y)?;
        let w = self.log(y, x)?;
        let moved = u - (&v + w) * (minkowski(&v, u) / (d * d));
        Ok(self.project_tangent(y, &moved))
    }

    fn project_tangent(&self, x: &DVector<f64>, a: &DVector<f64>) -> DVector<f64> {
        a + x * minkowski(x, a)
    }

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let o = self.apex();
        let v = self.random_tangent(&o, rng);
        self.exp(&o, &v).expect("hyperboloid exp is total")
    }

    fn random_tangent<R: Rng + ?Sized>(&self, x: &DVector<f64>, rng: &mut R) -> DVector<f64> {
        let o = self.apex();
        let mut g = DVector::<f64>::from_fn(self.n + 1, |_, _| rng.sample(StandardNormal));
        g[0] = 0.0;
        if self.dist(&o, x) < TINY * TINY {
            return g;
        }
        self.transport(&o, x, &g).expect("hyperboloid transport is total")
    }

    fn embedding_residual(&self, x: &DVector<f64>) -> f64 {
        if x.len() != self.n + 1 || x[0] <= 0.0 {
            return f64::INFINITY;
        }
        (minkowski(x, x) + 1.0).abs()
    }

    fn tangent_residual(&self, x: &DVector<f64>, v: &DVector<f64>) -> f64 {
        minkowski(x, v).abs()
    }
}
