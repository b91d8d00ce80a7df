use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use super::check_dim;
use crate::error::{Error, Result};
use crate::manifold::{CurvatureInfo, Manifold};

/// Symmetric positive definite `n × n` matrices with the affine-invariant
/// metric `⟨U, V⟩_X = tr(X⁻¹ U X⁻¹ V)`.
///
/// Every map is evaluated through the symmetric eigendecomposition of the
/// whitened matrix `X^{-1/2} Y X^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spd {
    n: usize,
}

pub(crate) fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// `V f(Λ) Vᵀ` for the symmetric part of `a`.
pub(crate) fn sym_apply(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(a));
    let vals = eig.eigenvalues.map(f);
    let v = &eig.eigenvectors;
    let out = v * DMatrix::from_diagonal(&vals) * v.transpose();
    symmetrize(&out)
}

pub(crate) fn sym_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    SymmetricEigen::new(symmetrize(a)).eigenvalues.iter().copied().collect()
}

/// `(X^{1/2}, X^{-1/2})`
fn sqrt_pair(x: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrize(x));
    let v = &eig.eigenvectors;
    let s = eig.eigenvalues.map(|l| l.sqrt());
    let si = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    (
        symmetrize(&(v * DMatrix::from_diagonal(&s) * v.transpose())),
        symmetrize(&(v * DMatrix::from_diagonal(&si) * v.transpose())),
    )
}

impl Spd {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n, "SPD manifold")?;
        Ok(Self { n })
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.n, self.n)
    }

    fn whiten(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let (s, si) = sqrt_pair(x);
        let w = symmetrize(&(&si * y * &si));
        (s, si, w)
    }

    fn check_positive(&self, y: &DMatrix<f64>) -> Result<()> {
        let min = sym_eigenvalues(y).into_iter().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::Numeric(format!("SPD map left the cone: min eigenvalue {min}")));
        }
        Ok(())
    }
}

impl Manifold for Spd {
    type Point = DMatrix<f64>;

    fn name(&self) -> &'static str {
        "spd"
    }

    fn dimension(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn curvature(&self) -> CurvatureInfo {
        CurvatureInfo { kappa_min: -0.5, kappa_max: 0.0, nabla_r_bound: 0.0 }
    }

    fn inner(&self, x: &DMatrix<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
        let (_, si) = sqrt_pair(x);
        let a = &si * u * &si;
        let b = &si * v * &si;
        a.dot(&b)
    }

    fn exp(&self, x: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let (s, _, w) = self.whiten(x, v);
        let y = symmetrize(&(&s * sym_apply(&w, f64::exp) * &s));
        self.check_positive(&y)?;
        Ok(y)
    }

    fn log(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let (s, _, w) = self.whiten(x, y);
        if sym_eigenvalues(&w).iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Domain("SPD log of a matrix that is not positive definite".into()));
        }
        Ok(symmetrize(&(&s * sym_apply(&w, f64::ln) * &s)))
    }

    fn dist(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
        let (_, _, w) = self.whiten(x, y);
        sym_eigenvalues(&w).iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt()
    }

    fn transport(&self, x: &DMatrix<f64>, y: &DMatrix<f64>, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        // E = (Y X⁻¹)^{1/2} = X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{-1/2}
        let (s, si, w) = self.whiten(x, y);
        let e = &s * sym_apply(&w, f64::sqrt) * &si;
        Ok(symmetrize(&(&e * u * e.transpose())))
    }

    fn project_tangent(&self, _x: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
        symmetrize(a)
    }

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> DMatrix<f64> {
        let g = DMatrix::<f64>::from_fn(self.n, self.n, |_, _| rng.sample(StandardNormal));
        sym_apply(&symmetrize(&g), f64::exp)
    }

    fn random_tangent<R: Rng + ?Sized>(&self, x: &DMatrix<f64>, rng: &mut R) -> DMatrix<f64> {
        let g = DMatrix::<f64>::from_fn(self.n, self.n, |_, _| rng.sample(StandardNormal));
        let (s, _) = sqrt_pair(x);
        symmetrize(&(&s * symmetrize(&g) * &s))
    }

    fn embedding_residual(&self, x: &DMatrix<f64>) -> f64 {
        if x.nrows() != self.n || x.ncols() != self.n {
            return f64::INFINITY;
        }
        let asym = (x - x.transpose()).norm();
        let min = sym_eigenvalues(x).into_iter().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            asym
        } else {
            f64::INFINITY
        }
    }

    fn tangent_residual(&self, _x: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
        (v - v.transpose()).norm()
    }
}
