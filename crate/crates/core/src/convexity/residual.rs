//! Double exponential map and its single-exponential representation.

use crate::error::{Error, Result};
use crate::manifold::{Ambient, Manifold};

/// `Exp_x(u, v) = Exp_{Exp_x(u)}(Γ_x^{Exp_x(u)} v)`.
pub fn double_exp<M: Manifold>(m: &M, x: &M::Point, u: &M::Point, v: &M::Point) -> Result<M::Point> {
    let y = m.exp(x, u)?;
    let moved = m.transport(x, &y, v)?;
    m.exp(&y, &moved)
}

/// `h_x(u, v) = log_x(Exp_x(u, v))`, so that `exp_x(h) = Exp_x(u, v)`.
pub fn exp_map_operator<M: Manifold>(m: &M, x: &M::Point, u: &M::Point, v: &M::Point) -> Result<M::Point> {
    let z = double_exp(m, x, u, v)?;
    m.log(x, &z).map_err(|e| Error::Numeric(format!("double exponential leaves the log domain: {e}")))
}

/// `R_x(u, v) = h_x(u, v) − u − v`; zero in flat space.
pub fn residual<M: Manifold>(m: &M, x: &M::Point, u: &M::Point, v: &M::Point) -> Result<M::Point> {
    let mut h = exp_map_operator(m, x, u, v)?;
    h.axpy(-1.0, u);
    h.axpy(-1.0, v);
    Ok(h)
}
