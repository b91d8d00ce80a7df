use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ManifoldKind;
use crate::convexity::{certify, riemannian_ball_alpha, ConvexityCertificate, Notion};
use crate::error::{Error, Result};
use crate::manifold::CurvatureInfo;
use crate::manifolds::{Euclidean, Hyperboloid, Spd, Sphere};
use crate::sets::{BallOracle, GeodesicBall};

/// A ball certification job. The ball is centered at a canonical point: the
/// origin, `e₁` on the sphere, the apex of the hyperboloid, the identity
/// matrix for SPD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub manifold: ManifoldKind,
    /// Ambient dimension (sphere, Euclidean), intrinsic dimension
    /// (hyperboloid) or matrix size (SPD).
    pub dim: usize,
    pub radius: f64,
    pub notion: Notion,
    /// Defaults to [`default_alpha`].
    pub alpha: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            manifold: ManifoldKind::Euclidean,
            dim: 2,
            radius: 1.0,
            notion: Notion::ScalingInequality,
            alpha: None,
            samples: 10_000,
            seed: 0,
            output_path: None,
        }
    }
}

/// The constant predicted for a ball of radius `r`: `1/(2r)` in flat space;
/// on curved manifolds the Riemannian strong-convexity constant of balls
/// below the admissible radius, carried unchanged to the scaling, geodesic
/// and double-geodesic notions and halved for the approximate scaling
/// inequality.
pub fn default_alpha(curv: &CurvatureInfo, r: f64, notion: Notion) -> Result<f64> {
    if curv.k() == 0.0 {
        return Ok(1.0 / (2.0 * r));
    }
    let a = riemannian_ball_alpha(curv, r).map_err(|e| {
        Error::Config(format!("no predicted alpha for radius {r} ({e}); pass one explicitly"))
    })?;
    Ok(match notion {
        Notion::ApproxScalingInequality => a / 2.0,
        _ => a,
    })
}

fn run<M: BallOracle>(m: M, center: M::Point, cfg: &CertifyConfig) -> Result<ConvexityCertificate> {
    let alpha = match cfg.alpha {
        Some(a) => a,
        None => default_alpha(&m.curvature(), cfg.radius, cfg.notion)?,
    };
    let ball = GeodesicBall::new(m, center, cfg.radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    certify(&ball, cfg.notion, alpha, cfg.samples, &mut rng)
}

/// Runs the certifier and writes the certificate to `output_path` when set.
pub fn cmd_certify(cfg: &CertifyConfig) -> Result<ConvexityCertificate> {
    if cfg.samples == 0 {
        return Err(Error::Config("samples must be positive".into()));
    }
    let cert = match cfg.manifold {
        ManifoldKind::Euclidean => {
            let m = Euclidean::new(cfg.dim)?;
            let c = nalgebra::DVector::zeros(cfg.dim);
            run(m, c, cfg)?
        }
        ManifoldKind::Sphere => {
            let m = Sphere::new(cfg.dim)?;
            let c = m.basis_point(0);
            run(m, c, cfg)?
        }
        ManifoldKind::Hyperboloid => {
            let m = Hyperboloid::new(cfg.dim)?;
            let c = m.apex();
            run(m, c, cfg)?
        }
        ManifoldKind::Spd => {
            let m = Spd::new(cfg.dim)?;
            let c = m.identity();
            run(m, c, cfg)?
        }
    };
    if let Some(path) = &cfg.output_path {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, cert.to_json()?)?;
    }
    Ok(cert)
}
