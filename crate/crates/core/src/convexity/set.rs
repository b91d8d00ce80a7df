use rand::Rng;

use crate::error::{Error, Result};
use crate::manifold::{normalize, random_unit_tangent, Ambient, Manifold};
use crate::sets::scalar::bisect_root;

/// A point counts as a member when its slack is at least `-MEMBERSHIP_TOL`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// A compact, uniquely geodesic subset of a manifold.
///
/// Membership is expressed through a signed slack (non-negative inside);
/// certifiers report the smallest slack they observe, which makes a failing
/// certificate quantitative.
pub trait ConvexSet<M: Manifold>: Send + Sync {
    fn manifold(&self) -> &M;

    /// Signed slack of the defining constraint: `>= 0` inside, `< 0` outside.
    fn slack(&self, x: &M::Point) -> f64;

    fn contains(&self, x: &M::Point) -> bool {
        self.slack(x) >= -MEMBERSHIP_TOL
    }

    /// A point well inside the set, used as the origin for radial sampling.
    fn anchor(&self) -> &M::Point;

    /// Upper bound on the distance between two members.
    fn diameter(&self) -> f64;

    /// A random member of the set.
    fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> M::Point;

    /// A random point of the boundary. The default walks from the anchor
    /// towards a random member until the slack vanishes.
    fn sample_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<M::Point> {
        let m = self.manifold();
        let target = self.sample_interior(rng);
        let dir = match normalize(m, self.anchor(), &m.log(self.anchor(), &target)?) {
            Some(d) => d,
            None => random_unit_tangent(m, self.anchor(), rng),
        };
        radial_boundary(self, &dir)
    }

    /// Unit outward normal at a boundary point, when the set knows one.
    fn outward_normal(&self, _x: &M::Point) -> Option<M::Point> {
        None
    }

    fn has_lmo(&self) -> bool {
        false
    }

    /// `argmax_{z ∈ C} ⟨w, log_x z⟩`.
    fn lmo(&self, _w: &M::Point, _x: &M::Point) -> Result<M::Point> {
        Err(Error::Config("this set has no linear oracle".into()))
    }
}

/// Boundary point on the geodesic ray from the anchor with unit direction
/// `dir ∈ T_anchor`.
pub fn radial_boundary<M: Manifold, S: ConvexSet<M> + ?Sized>(set: &S, dir: &M::Point) -> Result<M::Point> {
    let m = set.manifold();
    let c = set.anchor();
    let hi = set.diameter().min(m.injectivity_radius() * 0.999);
    let point_at = |s: f64| m.exp(c, &dir.scaled(s));
    let s = bisect_root(
        |s| point_at(s).map(|p| set.slack(&p)).unwrap_or(f64::NEG_INFINITY),
        0.0,
        hi,
        1e-14,
    )?;
    point_at(s)
}

/// Boundary point close to the boundary point `x`: perturb `x` by `eps`
/// along a random direction and project radially back onto the boundary.
pub fn boundary_near<M: Manifold, S: ConvexSet<M> + ?Sized, R: Rng + ?Sized>(
    set: &S,
    x: &M::Point,
    eps: f64,
    rng: &mut R,
) -> Result<M::Point> {
    let m = set.manifold();
    let u = random_unit_tangent(m, x, rng);
    let moved = m.exp(x, &u.scaled(eps))?;
    let c = set.anchor();
    match normalize(m, c, &m.log(c, &moved)?) {
        Some(dir) => radial_boundary(set, &dir),
        None => Ok(x.clone()),
    }
}
