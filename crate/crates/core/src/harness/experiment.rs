use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{CenterKind, ExperimentConfig, ManifoldKind};
use crate::error::Result;
use crate::manifold::Manifold;
use crate::manifolds::{Euclidean, Sphere};
use crate::objectives::{sample_target_near, QuadraticOnEmbedded};
use crate::sets::{BallOracle, GeodesicBall};
use crate::solver::{rfw_run, tail_rate, RateFit, RfwProblem, RfwTrace, Status};

/// The quadratic-over-a-ball instance of an experiment.
pub struct ExperimentInstance<M: Manifold> {
    pub objective: QuadraticOnEmbedded<M>,
    pub ball: GeodesicBall<M>,
    pub target_distance: f64,
}

/// Draws the instance: Gram matrix first, then `x*` (by rejection, within
/// `π/2` of the center on the sphere), then the center when it is random.
pub fn build_instance<M: BallOracle<Point = DVector<f64>> + Clone>(manifold: M, cfg: &ExperimentConfig) -> Result<ExperimentInstance<M>> {
    let d = cfg.ambient_dim;
    let sphere = Sphere::new(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let b = DMatrix::<f64>::from_fn(cfg.gram_rows, d, |_, _| rand::Rng::sample(&mut rng, StandardNormal));
    let ones = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    let target = sample_target_near(&sphere, &ones, std::f64::consts::FRAC_PI_2, &mut rng)?;
    let center = match cfg.center {
        CenterKind::Ones => ones,
        CenterKind::Random => sphere.random_point(&mut rng),
    };
    let target_distance = manifold.dist(&center, &target);
    let objective = QuadraticOnEmbedded::from_gram(manifold.clone(), &b, target)?;
    let ball = GeodesicBall::new(manifold, center, cfg.radius_ratio * target_distance)?;
    Ok(ExperimentInstance { objective, ball, target_distance })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub status: Status,
    pub iterations: usize,
    pub final_f: Option<f64>,
    pub final_gap: Option<f64>,
    pub min_gap: Option<f64>,
    pub radius: f64,
    pub target_distance: f64,
    /// Least-squares fit of the log gap over the last half of the
    /// iterations above the roundoff floor.
    pub tail_fit: Option<RateFit>,
    pub trace_csv: PathBuf,
}

fn run_on<M: BallOracle<Point = DVector<f64>> + Clone>(manifold: M, cfg: &ExperimentConfig) -> Result<(RfwTrace<DVector<f64>>, ExperimentInstance<M>)> {
    let inst = build_instance(manifold, cfg)?;
    let l = inst.objective.smoothness();
    let x0 = inst.ball.center().clone();
    let problem = RfwProblem::new(inst.objective.clone(), inst.ball.clone(), l, x0)?;
    let trace = rfw_run(&problem, cfg.step_rule, cfg.max_iter, cfg.gap_tol);
    Ok((trace, inst))
}

/// Solves the configured instance and returns the trace with the summary
/// (without touching the file system).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(RfwTrace<DVector<f64>>, ExperimentSummary)> {
    cfg.validate()?;
    let (trace, radius, target_distance) = match cfg.manifold {
        ManifoldKind::Euclidean => {
            let (t, i) = run_on(Euclidean::new(cfg.ambient_dim)?, cfg)?;
            (t, i.ball.radius(), i.target_distance)
        }
        _ => {
            let (t, i) = run_on(Sphere::new(cfg.ambient_dim)?, cfg)?;
            (t, i.ball.radius(), i.target_distance)
        }
    };
    let summary = ExperimentSummary {
        config: cfg.clone(),
        status: trace.status.clone(),
        iterations: trace.records.len(),
        final_f: trace.final_value(),
        final_gap: trace.final_gap(),
        min_gap: trace.records.iter().map(|r| r.dual_gap).reduce(f64::min),
        radius,
        target_distance,
        tail_fit: tail_rate(&trace),
        trace_csv: trace_path(&cfg.output_path, cfg.seed),
    };
    Ok((trace, summary))
}

pub fn trace_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("trace_seed{seed}.csv"))
}

pub fn summary_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("summary_seed{seed}.json"))
}

fn write_plot_script(dir: &Path, seed: u64) -> Result<()> {
    let script = format!(
        "set datafile separator ','\n\
         set logscale y\n\
         set xlabel 'iteration'\n\
         set ylabel 'dual gap'\n\
         set terminal pngcairo size 800,500\n\
         set output 'gap_seed{seed}.png'\n\
         plot 'trace_seed{seed}.csv' using 1:3 skip 1 with lines title 'FW dual gap'\n"
    );
    fs::write(dir.join(format!("plot_seed{seed}.gp")), script)?;
    Ok(())
}

/// Runs the experiment and writes the CSV trace, the JSON summary and, if
/// requested, a gnuplot script into `cfg.output_path`.
pub fn cmd_run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let (trace, summary) = run_experiment(cfg)?;
    fs::create_dir_all(&cfg.output_path)?;
    let csv = fs::File::create(trace_path(&cfg.output_path, cfg.seed))?;
    trace.write_csv(BufWriter::new(csv))?;
    fs::write(summary_path(&cfg.output_path, cfg.seed), serde_json::to_string_pretty(&summary)?)?;
    if cfg.plot_script {
        write_plot_script(&cfg.output_path, cfg.seed)?;
    }
    Ok(summary)
}

/// One experiment per seed in `seeds`, in parallel.
pub fn cmd_run_sweep(base: &ExperimentConfig, seeds: std::ops::RangeInclusive<u64>) -> Vec<Result<ExperimentSummary>> {
    let seeds: Vec<u64> = seeds.collect();
    seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = base.clone();
            cfg.seed = seed;
            cmd_run_experiment(&cfg)
        })
        .collect()
}
