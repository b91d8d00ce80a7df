use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;

use rfw::convexity::Notion;
use rfw::error::{Error, Result};
use rfw::harness::{
    cmd_certify, cmd_lmo_test, cmd_run_experiment, cmd_run_sweep, resolve_experiment, CenterKind, CertifyConfig,
    ExperimentOverrides, LmoTestConfig, ManifoldKind, Preset,
};
use rfw::solver::{Status, StepRule};

/// Riemannian Frank-Wolfe experiments and strong-convexity certificates.
#[derive(Parser, Debug)]
#[command(name = "rfw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize a random quadratic over a ball on the sphere and write the trace.
    RunExperiment(ExperimentArgs),
    /// Certify a strong-convexity notion on a geodesic ball.
    Certify(CertifyArgs),
    /// Cross-check the ball oracles against a boundary scan.
    LmoTest(LmoTestArgs),
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// JSON config; its fields override the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Inclusive seed range `a..b`, run in parallel.
    #[arg(long, value_parser = parse_seed_range)]
    seeds: Option<std::ops::RangeInclusive<u64>>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_from_str::<ManifoldKind>)]
    manifold: Option<ManifoldKind>,
    #[arg(long)]
    ambient_dim: Option<usize>,
    #[arg(long)]
    gram_rows: Option<usize>,
    #[arg(long)]
    radius_ratio: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    gap_tol: Option<f64>,
    /// short-step, fixed-schedule or exact-line-search.
    #[arg(long, value_parser = parse_from_str::<StepRule>)]
    step_rule: Option<StepRule>,
    /// ones or random.
    #[arg(long, value_parser = parse_center)]
    center: Option<CenterKind>,
    /// Also write a gnuplot script.
    #[arg(long)]
    plot: bool,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_from_str::<ManifoldKind>)]
    manifold: Option<ManifoldKind>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    /// geodesic, riemannian, double-geodesic, scaling or approx-scaling.
    #[arg(long, value_parser = parse_from_str::<Notion>)]
    notion: Option<Notion>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Certificate file; printed to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LmoTestArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_from_str::<ManifoldKind>)]
    manifold: Option<ManifoldKind>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    parse_from_str(s)
}

fn parse_center(s: &str) -> std::result::Result<CenterKind, String> {
    match s {
        "ones" => Ok(CenterKind::Ones),
        "random" => Ok(CenterKind::Random),
        other => Err(format!("unknown center `{other}`")),
    }
}

fn parse_seed_range(s: &str) -> std::result::Result<std::ops::RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad seed `{a}`: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad seed `{b}`: {e}"))?;
    if a > b {
        return Err(format!("empty seed range {a}..{b}"));
    }
    Ok(a..=b)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn run_experiment(a: ExperimentArgs) -> Result<bool> {
    let file = a.config.as_ref().map(|p| ExperimentOverrides::from_file(p)).transpose()?;
    let flags = ExperimentOverrides {
        manifold: a.manifold,
        ambient_dim: a.ambient_dim,
        gram_rows: a.gram_rows,
        radius_ratio: a.radius_ratio,
        seed: a.seed,
        max_iter: a.max_iter,
        gap_tol: a.gap_tol,
        step_rule: a.step_rule,
        center: a.center,
        output_path: a.out,
        plot_script: a.plot.then_some(true),
    };
    let cfg = resolve_experiment(a.preset, file.as_ref(), &flags)?;
    let summaries = match a.seeds {
        Some(range) => cmd_run_sweep(&cfg, range),
        None => vec![cmd_run_experiment(&cfg)],
    };
    let mut ok = true;
    for s in summaries {
        let s = s?;
        println!(
            "seed {}: {:?} after {} iterations, final gap {:.3e}, tail rate {}",
            s.config.seed,
            s.status,
            s.iterations,
            s.final_gap.unwrap_or(f64::NAN),
            s.tail_fit.map_or("n/a".to_string(), |f| format!("{:.4} (R^2 {:.4})", f.rate, f.r_squared)),
        );
        ok &= !matches!(s.status, Status::Failed(_));
    }
    Ok(ok)
}

fn certify(a: CertifyArgs) -> Result<bool> {
    let mut cfg: CertifyConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => CertifyConfig::default(),
    };
    macro_rules! set {
        ($($f:ident => $g:ident),*) => {$(
            if let Some(v) = a.$f {
                cfg.$g = v;
            }
        )*};
    }
    set!(manifold => manifold, dim => dim, radius => radius, notion => notion, samples => samples, seed => seed);
    if a.alpha.is_some() {
        cfg.alpha = a.alpha;
    }
    if a.out.is_some() {
        cfg.output_path = a.out;
    }
    let cert = cmd_certify(&cfg)?;
    if cfg.output_path.is_none() {
        println!("{}", cert.to_json()?);
    }
    eprintln!(
        "{:?} at alpha = {}: worst margin {:.3e} over {} samples, {}",
        cert.notion,
        cert.alpha_tested,
        cert.worst_margin,
        cert.samples,
        if cert.passed { "pass" } else { "FAIL" }
    );
    Ok(cert.passed)
}

fn lmo_test(a: LmoTestArgs) -> Result<bool> {
    let mut cfg: LmoTestConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => LmoTestConfig::default(),
    };
    if let Some(v) = a.manifold {
        cfg.manifold = v;
    }
    if let Some(v) = a.dim {
        cfg.dim = v;
    }
    if let Some(v) = a.radius {
        cfg.radius = v;
    }
    if let Some(v) = a.instances {
        cfg.instances = v;
    }
    if let Some(v) = a.grid {
        cfg.grid = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.tolerance {
        cfg.tolerance = v;
    }
    if a.out.is_some() {
        cfg.output_path = a.out;
    }
    let report = cmd_lmo_test(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RFW_LOG")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::RunExperiment(a) => run_experiment(a),
        Command::Certify(a) => certify(a),
        Command::LmoTest(a) => lmo_test(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
