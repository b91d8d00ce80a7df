//! Command implementations behind the `rfw` binary: the sphere quadratic
//! experiment, ball certification and the oracle cross-check.

mod certify;
mod config;
mod experiment;

pub use certify::{cmd_certify, default_alpha, CertifyConfig};
pub use config::{resolve_experiment, CenterKind, ExperimentConfig, ExperimentOverrides, ManifoldKind, Preset};
pub use experiment::{
    build_instance, cmd_run_experiment, cmd_run_sweep, run_experiment, summary_path, trace_path, ExperimentInstance,
    ExperimentSummary,
};
pub use lmo_test::{cmd_lmo_test, LmoTestConfig, LmoTestReport};
