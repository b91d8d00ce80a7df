//! Strong convexity of sets and functions: sampling certifiers for each
//! notion, the constants that predict them, and the exponential-map
//! residual.

mod certify;
mod constants;
mod functions;
mod residual;
pub mod set;
mod truncated;

pub use certify::{
    certify, check_approx_scaling_inequality, check_double_geodesic_strong_convexity,
    check_geodesic_strong_convexity, check_geodesic_strong_convexity_with, check_riemannian_strong_convexity,
    check_scaling_inequality, estimate_alpha, scaling_residual, ConvexityCertificate, DistanceEquivalence,
    DistanceFn, Notion, Witness, CERT_TOL,
};
pub use constants::{
    delta, levelset_alpha, riemannian_ball_alpha, riemannian_strong_convexity_fixed_point,
    riemannian_strong_convexity_radius, sublevel_ball_alpha, zeta,
};
pub use functions::{check_gconvexity_of_function, check_smoothness_gradient_bound, FunctionCheck, SmoothStronglyConvexFn};
pub use residual::{double_exp, exp_map_operator, residual};
pub use set::{boundary_near, radial_boundary, ConvexSet, MEMBERSHIP_TOL};
pub use truncated::TruncatedBall;
