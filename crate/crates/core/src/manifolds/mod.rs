//! Concrete manifolds: Euclidean space, the unit sphere, the hyperboloid
//! model of hyperbolic space and SPD matrices with the affine-invariant
//! metric.

mod euclidean;
mod hyperboloid;
mod spd;
mod sphere;

pub use euclidean::Euclidean;
pub use hyperboloid::Hyperboloid;
pub use spd::Spd;
pub use sphere::Sphere;

use crate::error::{Error, Result};

/// Below this norm a tangent vector is treated as zero by `exp`/`log`.
pub(crate) const TINY: f64 = 1e-12;

/// `sin(t) / t` with its limit at zero.
pub(crate) fn sinc(t: f64) -> f64 {
    if t.abs() < TINY {
        1.0
    } else {
        t.sin() / t
    }
}

/// `sinh(t) / t` with its limit at zero.
pub(crate) fn sinhc(t: f64) -> f64 {
    if t.abs() < TINY {
        1.0
    } else {
        t.sinh() / t
    }
}

pub(crate) fn check_dim(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::Config(format!("{what} needs dimension >= 2, got {n}")));
    }
    Ok(())
}
