//! Frank-Wolfe on Riemannian manifolds over strongly convex sets.
//!
//! * [`manifold`] and [`manifolds`]: the geometry kernel (sphere, Euclidean
//!   space, hyperboloid, SPD cone).
//! * [`sets`]: geodesic balls and their linear minimization oracles.
//! * [`convexity`]: sampling certifiers for strongly convex sets and the
//!   constants predicted for balls.
//! * [`objectives`]: quadratics on embedded manifolds and half squared
//!   distances.
//! * [`solver`]: the iteration, step rules, traces and rate checks.
//! * [`harness`]: configuration and the commands behind the `rfw` binary.
//!
//! The guide in `book/` walks through each part with runnable examples.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod error;
pub mod harness;
pub mod manifold;
pub mod manifolds;
pub mod objectives;
pub mod sets;
pub mod solver;

// Book chapters run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/manifolds.md")]
    mod manifolds {}
    #[doc = include_str!("../../../book/src/balls.md")]
    mod balls {}
    #[doc = include_str!("../../../book/src/convexity.md")]
    mod convexity {}
    #[doc = include_str!("../../../book/src/objectives.md")]
    mod objectives {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
