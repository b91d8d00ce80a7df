use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::check_dim;
use crate::error::Result;
use crate::manifold::{Ambient, CurvatureInfo, Manifold};

/// Flat `ℝⁿ`: `exp(x, v) = x + v`, `log(x, y) = y - x`, trivial transport.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    n: usize,
}

impl Euclidean {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n, "euclidean space")?;
        Ok(Self { n })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }
}

impl Manifold for Euclidean {
    type Point = DVector<f64>;

    fn name(&self) -> &'static str {
        "euclidean"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn curvature(&self) -> CurvatureInfo {
        CurvatureInfo::constant(0.0)
    }

    fn inner(&self, _x: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(v)
    }

    fn exp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(x + v)
    }

    fn log(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(y - x)
    }

    fn dist(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (y - x).norm()
    }

    fn transport(&self, _x: &DVector<f64>, _y: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(u.clone())
    }

    fn project_tangent(&self, _x: &DVector<f64>, a: &DVector<f64>) -> DVector<f64> {
        a.clone()
    }

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(self.n, |_, _| rng.sample(StandardNormal))
    }

    fn random_tangent<R: Rng + ?Sized>(&self, x: &DVector<f64>, rng: &mut R) -> DVector<f64> {
        let mut v = x.zeros_like();
        v.iter_mut().for_each(|c| *c = rng.sample(StandardNormal));
        v
    }

    fn embedding_residual(&self, x: &DVector<f64>) -> f64 {
        if x.len() == self.n && x.iter().all(|c| c.is_finite()) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn tangent_residual(&self, _x: &DVector<f64>, _v: &DVector<f64>) -> f64 {
        0.0
    }
}
