use rand::Rng;

use super::set::ConvexSet;
use crate::error::{Error, Result};
use crate::manifold::{normalize, Manifold};
use crate::sets::{BallOracle, GeodesicBall};

/// A ball cut by the half-space `{x : ⟨a, log_c x⟩ ≤ h}` in the tangent space
/// at its center `c`.
///
/// In flat space this is a convex set with a flat face, so it is convex but
/// not strongly convex. On curved manifolds the cut is only a test fixture.
#[derive(Debug, Clone)]
pub struct TruncatedBall<M: Manifold> {
    ball: GeodesicBall<M>,
    normal: M::Point,
    offset: f64,
}

impl<M: BallOracle> TruncatedBall<M> {
    /// `normal` is normalized; `offset` must lie in `(0, r)` so the center
    /// stays inside and the face is not empty.
    pub fn new(ball: GeodesicBall<M>, normal: M::Point, offset: f64) -> Result<Self> {
        let m = ball.manifold();
        let normal = normalize(m, ball.center(), &normal)
            .ok_or_else(|| Error::Config("face normal must be non-zero".into()))?;
        if !(offset > 0.0 && offset < ball.radius()) {
            return Err(Error::Config(format!("face offset must lie in (0, {}), got {offset}", ball.radius())));
        }
        Ok(Self { ball, normal, offset })
    }

    fn face_slack(&self, x: &M::Point) -> f64 {
        let m = self.ball.manifold();
        match m.log(self.ball.center(), x) {
            Ok(v) => self.offset - m.inner(self.ball.center(), &self.normal, &v),
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

impl<M: BallOracle> ConvexSet<M> for TruncatedBall<M> {
    fn manifold(&self) -> &M {
        self.ball.manifold()
    }

    fn slack(&self, x: &M::Point) -> f64 {
        self.ball.slack(x).min(self.face_slack(x))
    }

    fn anchor(&self) -> &M::Point {
        self.ball.center()
    }

    fn diameter(&self) -> f64 {
        self.ball.diameter()
    }

    fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> M::Point {
        loop {
            let x = self.ball.sample_interior(rng);
            if self.face_slack(&x) >= 0.0 {
                return x;
            }
        }
    }
}
