use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{StepRule, DEFAULT_GAP_TOL, DEFAULT_MAX_ITER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldKind {
    Sphere,
    Euclidean,
    Hyperboloid,
    Spd,
}

impl std::str::FromStr for ManifoldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(ManifoldKind::Sphere),
            "euclidean" => Ok(ManifoldKind::Euclidean),
            "hyperboloid" => Ok(ManifoldKind::Hyperboloid),
            "spd" => Ok(ManifoldKind::Spd),
            other => Err(Error::Config(format!("unknown manifold `{other}`"))),
        }
    }
}

/// How the ball center of the experiment is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterKind {
    /// The all-ones vector, normalized onto the sphere.
    Ones,
    /// A uniformly random point, drawn after the matrix and the target.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `d = 50`, 25 Gram rows, 500 iterations.
    PaperDesk,
    /// `d = 500`, 250 Gram rows, 500 iterations.
    PaperFigure,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-desk" => Ok(Preset::PaperDesk),
            "paper-figure" => Ok(Preset::PaperFigure),
            other => Err(Error::Config(format!("unknown preset `{other}`"))),
        }
    }
}

/// Parameters of the sphere quadratic experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub manifold: ManifoldKind,
    pub ambient_dim: usize,
    pub gram_rows: usize,
    /// Ball radius as a fraction of `d(x*, center)`; below 1 the unconstrained
    /// minimizer lies outside the ball.
    pub radius_ratio: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub gap_tol: f64,
    pub step_rule: StepRule,
    pub center: CenterKind,
    /// Output directory.
    pub output_path: PathBuf,
    /// Also write a gnuplot script next to the trace.
    pub plot_script: bool,
}

impl ExperimentConfig {
    pub fn preset(p: Preset) -> Self {
        let (ambient_dim, gram_rows) = match p {
            Preset::PaperDesk => (50, 25),
            Preset::PaperFigure => (500, 250),
        };
        Self {
            manifold: ManifoldKind::Sphere,
            ambient_dim,
            gram_rows,
            radius_ratio: 0.9,
            seed: 0,
            max_iter: DEFAULT_MAX_ITER,
            gap_tol: DEFAULT_GAP_TOL,
            step_rule: StepRule::ShortStep,
            center: CenterKind::Ones,
            output_path: PathBuf::from("rfw-out"),
            plot_script: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.manifold, ManifoldKind::Sphere | ManifoldKind::Euclidean) {
            return Err(Error::Config("the experiment runs on the sphere or in Euclidean space".into()));
        }
        if self.ambient_dim < 2 || self.gram_rows == 0 || self.max_iter == 0 {
            return Err(Error::Config("ambient_dim >= 2, gram_rows >= 1 and max_iter >= 1 are required".into()));
        }
        if !(self.radius_ratio > 0.0 && self.radius_ratio < 1.0) {
            return Err(Error::Config(format!("radius_ratio must lie in (0, 1), got {}", self.radius_ratio)));
        }
        if !(self.gap_tol >= 0.0) {
            return Err(Error::Config(format!("gap_tol must be non-negative, got {}", self.gap_tol)));
        }
        Ok(())
    }

    /// Applies every field that is set in `o`.
    pub fn apply(&mut self, o: &ExperimentOverrides) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if let Some(v) = &o.$f {
                    self.$f = v.clone();
                }
            )*};
        }
        take!(manifold, ambient_dim, gram_rows, radius_ratio, seed, max_iter, gap_tol, step_rule, center, output_path, plot_script);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A partial [`ExperimentConfig`], as read from a config file or built from
/// command-line flags. A complete config file is also a valid override set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentOverrides {
    pub manifold: Option<ManifoldKind>,
    pub ambient_dim: Option<usize>,
    pub gram_rows: Option<usize>,
    pub radius_ratio: Option<f64>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub gap_tol: Option<f64>,
    pub step_rule: Option<StepRule>,
    pub center: Option<CenterKind>,
    pub output_path: Option<PathBuf>,
    pub plot_script: Option<bool>,
}

impl ExperimentOverrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Preset defaults, then the config file, then command-line flags.
pub fn resolve_experiment(
    preset: Option<Preset>,
    file: Option<&ExperimentOverrides>,
    flags: &ExperimentOverrides,
) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::preset(preset.unwrap_or(Preset::PaperDesk));
    if let Some(f) = file {
        cfg.apply(f);
    }
    cfg.apply(flags);
    cfg.validate()?;
    Ok(cfg)
}
