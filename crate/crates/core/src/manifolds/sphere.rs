use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_dim, sinc, TINY};
use crate::error::{Error, Result};
use crate::manifold::{CurvatureInfo, Manifold};

/// Points closer than this to the cut locus are rejected by `log`.
const CUT_LOCUS_MARGIN: f64 = 1e-6;

/// Unit sphere `𝕊ⁿ⁻¹ ⊂ ℝⁿ` with the metric induced by the ambient dot product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sphere {
    n: usize,
}

impl Sphere {
    /// `n` is the ambient dimension.
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n, "sphere")?;
        Ok(Self { n })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// `e_i` as a point of the sphere.
    pub fn basis_point(&self, i: usize) -> DVector<f64> {
        let mut e = DVector::zeros(self.n);
        e[i] = 1.0;
        e
    }
}

impl Manifold for Sphere {
    type Point = DVector<f64>;

    fn name(&self) -> &'static str {
        "sphere"
    }

    fn dimension(&self) -> usize {
        self.n - 1
    }

    fn curvature(&self) -> CurvatureInfo {
        CurvatureInfo::constant(1.0)
    }

    fn inner(&self, _x: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(v)
    }

    fn exp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        let theta = v.norm();
        if theta > PI {
            return Err(Error::Domain(format!("sphere exp with |v| = {theta} > pi")));
        }
        let mut y = x * theta.cos() + v * sinc(theta);
        let n = y.norm();
        y /= n;
        Ok(y)
    }

    fn log(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        let theta = self.dist(x, y);
        if theta > PI - CUT_LOCUS_MARGIN {
            return Err(Error::Domain(format!(
                "sphere log near the cut locus: dist = {theta}"
            )));
        }
        let p = y - x * x.dot(y);
        let s = p.norm();
        if s < TINY * TINY {
            return Ok(DVector::zeros(self.n));
        }
        Ok(p * (theta / s))
    }

    fn dist(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let c = x.dot(y);
        if c > 0.5 {
            2.0 * ((y - x).norm() / 2.0).min(1.0).asin()
        } else if c < -0.5 {
            PI - 2.0 * ((y + x).norm() / 2.0).min(1.0).asin()
        } else {
            c.clamp(-1.0, 1.0).acos()
        }
    }

    fn transport(&self, x: &DVector<f64>, y: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
        let v = self.log(x, y)?;
        let theta = v.norm();
        if theta < TINY * TINY {
            return Ok(self.project_tangent(y, u));
        }
        let e = v / theta;
        let along = e.dot(u);
        let moved = u + (&e * (theta.cos() - 1.0) - x * theta.sin()) * along;
        Ok(self.project_tangent(y, &moved))
    }

    fn project_tangent(&self, x: &DVector<f64>, a: &DVector<f64>) -> DVector<f64> {
        a - x * x.dot(a)
    }

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        loop {
            let g = DVector::<f64>::from_fn(self.n, |_, _| rng.sample(StandardNormal));
            let n = g.norm();
            if n > 1e-8 {
                return g / n;
            }
        }
    }

    fn random_tangent<R: Rng + ?Sized>(&self, x: &DVector<f64>, rng: &mut R) -> DVector<f64> {
        let g = DVector::<f64>::from_fn(self.n, |_, _| rng.sample(StandardNormal));
        self.project_tangent(x, &g)
    }

    fn embedding_residual(&self, x: &DVector<f64>) -> f64 {
        if x.len() != self.n {
            return f64::INFINITY;
        }
        (x.norm() - 1.0).abs()
    }

    fn tangent_residual(&self, x: &DVector<f64>, v: &DVector<f64>) -> f64 {
        x.dot(v).abs()
    }

    fn injectivity_radius(&self) -> f64 {
        PI
    }
}
