use std::path::Path;
use std::process::{Command, Output};

use rfw::convexity::ConvexityCertificate;
use rfw::harness::*;
use rfw::solver::StepRule;

fn rfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfw")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

// ---------- configuration ----------

#[test]
fn presets() {
    let d = ExperimentConfig::preset(Preset::PaperDesk);
    assert_eq!((d.ambient_dim, d.gram_rows, d.radius_ratio, d.max_iter), (50, 25, 0.9, 500));
    let f = ExperimentConfig::preset(Preset::PaperFigure);
    assert_eq!((f.ambient_dim, f.gram_rows, f.radius_ratio), (500, 250, 0.9));
    assert_eq!(d.manifold, ManifoldKind::Sphere);
    assert_eq!(d.step_rule, StepRule::ShortStep);
}

#[test]
fn flags_override_file_override_preset() {
    let file = ExperimentOverrides { seed: Some(5), max_iter: Some(40), gap_tol: Some(1e-3), ..Default::default() };
    let flags = ExperimentOverrides { seed: Some(9), ..Default::default() };
    let cfg = resolve_experiment(Some(Preset::PaperFigure), Some(&file), &flags).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.max_iter, 40);
    assert_eq!(cfg.gap_tol, 1e-3);
    assert_eq!(cfg.ambient_dim, 500);
}

#[test]
fn invalid_configs_are_rejected() {
    for o in [
        ExperimentOverrides { radius_ratio: Some(1.0), ..Default::default() },
        ExperimentOverrides { radius_ratio: Some(0.0), ..Default::default() },
        ExperimentOverrides { ambient_dim: Some(1), ..Default::default() },
        ExperimentOverrides { manifold: Some(ManifoldKind::Spd), ..Default::default() },
        ExperimentOverrides { gap_tol: Some(-1.0), ..Default::default() },
    ] {
        assert!(resolve_experiment(None, None, &o).is_err(), "{o:?}");
    }
}

#[test]
fn config_round_trips_through_json() {
    let mut cfg = ExperimentConfig::preset(Preset::PaperDesk);
    cfg.seed = 123;
    cfg.center = CenterKind::Random;
    cfg.step_rule = StepRule::ExactLineSearch;
    cfg.gap_tol = 1.234567890123e-11;
    let back: ExperimentConfig = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
    assert_eq!(back, cfg);
    // A full config is also a valid override file.
    let o: ExperimentOverrides = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
    assert_eq!(resolve_experiment(None, Some(&o), &ExperimentOverrides::default()).unwrap(), cfg);
    assert!(serde_json::from_str::<ExperimentOverrides>("{\"seeds\": 3}").is_err());

    let c = CertifyConfig { alpha: Some(0.3), ..Default::default() };
    let back: CertifyConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
    let l = LmoTestConfig { grid: 77, ..Default::default() };
    let back: LmoTestConfig = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
    assert_eq!(back, l);
}

// ---------- library commands ----------

#[test]
fn certify_examples() {
    let pass = cmd_certify(&CertifyConfig { alpha: Some(0.49), ..Default::default() }).unwrap();
    assert!(pass.passed);
    let fail = cmd_certify(&CertifyConfig { alpha: Some(0.6), ..Default::default() }).unwrap();
    assert!(!fail.passed);
    assert!(fail.witness.is_some());
    let cap = CertifyConfig {
        manifold: ManifoldKind::Sphere,
        dim: 3,
        radius: 0.1,
        notion: rfw::convexity::Notion::Riemannian,
        samples: 2000,
        ..Default::default()
    };
    let cert = cmd_certify(&cap).unwrap();
    assert!(cert.passed);
    assert!(cert.alpha_tested > 1.0);
    // Above the admissible radius there is no predicted constant.
    assert!(cmd_certify(&CertifyConfig { radius: 0.5, ..cap }).is_err());
}

#[test]
fn lmo_test_examples() {
    let rep = cmd_lmo_test(&LmoTestConfig { grid: 20_000, ..Default::default() }).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.max_gap_exact.unwrap() <= 1e-5);
    assert!(rep.max_boundary_error <= 1e-7);
    let rep = cmd_lmo_test(&LmoTestConfig { manifold: ManifoldKind::Euclidean, grid: 1000, instances: 30, ..Default::default() }).unwrap();
    assert!(rep.passed);
    let rep = cmd_lmo_test(&LmoTestConfig { manifold: ManifoldKind::Hyperboloid, radius: 1.0, grid: 5000, instances: 20, ..Default::default() }).unwrap();
    assert!(rep.passed);
    assert!(rep.max_gap_exact.is_none());
    assert!(cmd_lmo_test(&LmoTestConfig { manifold: ManifoldKind::Spd, ..Default::default() }).is_err());
}

#[test]
fn experiment_summary_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::preset(Preset::PaperDesk);
    cfg.max_iter = 60;
    cfg.seed = 3;
    cfg.plot_script = true;
    cfg.output_path = dir.path().to_path_buf();
    let s = cmd_run_experiment(&cfg).unwrap();
    assert_eq!(s.iterations, 60);
    assert!(s.radius < s.target_distance);
    let csv = read(&trace_path(dir.path(), 3));
    assert!(csv.starts_with("iter,f,dual_gap,step,dist_xv\n"));
    assert_eq!(csv.lines().count(), 61);
    let summary: serde_json::Value = serde_json::from_str(&read(&summary_path(dir.path(), 3))).unwrap();
    assert_eq!(summary["iterations"], 60);
    assert!(summary["tail_fit"]["rate"].as_f64().unwrap() < 1.0);
    assert!(dir.path().join("plot_seed3.gp").exists());
}

#[test]
fn euclidean_experiment_runs() {
    let mut cfg = ExperimentConfig::preset(Preset::PaperDesk);
    cfg.manifold = ManifoldKind::Euclidean;
    cfg.max_iter = 50;
    let (trace, s) = run_experiment(&cfg).unwrap();
    assert_eq!(trace.records.len(), s.iterations);
    assert!(s.final_gap.unwrap() < trace.records[0].dual_gap);
}

#[test]
fn sweeps_write_one_trace_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::preset(Preset::PaperDesk);
    cfg.max_iter = 20;
    cfg.output_path = dir.path().to_path_buf();
    let out = cmd_run_sweep(&cfg, 1..=4);
    assert_eq!(out.len(), 4);
    for (seed, s) in (1..=4).zip(out) {
        assert_eq!(s.unwrap().config.seed, seed);
        assert!(trace_path(dir.path(), seed).exists());
    }
    // Sweeps match the sequential runs byte for byte.
    let single = tempfile::tempdir().unwrap();
    cfg.output_path = single.path().to_path_buf();
    cfg.seed = 2;
    cmd_run_experiment(&cfg).unwrap();
    assert_eq!(read(&trace_path(dir.path(), 2)), read(&trace_path(single.path(), 2)));
}

// ---------- binary ----------

#[test]
fn binary_run_experiment_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = rfw(&["run-experiment", "--preset", "paper-desk", "--seed", "7", "--max-iter", "80", "--out", d.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(trace_path(a.path(), 7)).unwrap(), std::fs::read(trace_path(b.path(), 7)).unwrap());
}

#[test]
fn binary_reads_config_files_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, r#"{"seed": 11, "max_iter": 15, "ambient_dim": 10, "gram_rows": 5}"#).unwrap();
    let out = dir.path().join("out");
    let o = rfw(&["run-experiment", "--config", cfg_path.to_str().unwrap(), "--max-iter", "12", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&trace_path(&out, 11)).lines().count(), 13);
}

#[test]
fn binary_seed_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o = rfw(&["run-experiment", "--seeds", "1..3", "--max-iter", "10", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for s in 1..=3 {
        assert!(trace_path(dir.path(), s).exists());
    }
    assert_eq!(code(&rfw(&["run-experiment", "--seeds", "3..1"])), 2);
}

#[test]
fn binary_certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    let o = rfw(&["certify", "--manifold", "euclidean", "--radius", "1", "--notion", "scaling", "--alpha", "0.49", "--samples", "2000", "--out", cert_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cert: ConvexityCertificate = serde_json::from_str(&read(&cert_path)).unwrap();
    assert!(cert.passed);
    assert_eq!(cert.samples, 2000);

    let o = rfw(&["certify", "--manifold", "euclidean", "--radius", "1", "--alpha", "0.6", "--samples", "2000"]);
    assert_eq!(code(&o), 1);
    let cert: ConvexityCertificate = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!cert.passed);
    assert!(cert.witness.is_some());

    assert_eq!(code(&rfw(&["certify", "--notion", "convex"])), 2);
    assert_eq!(code(&rfw(&["certify", "--samples", "0"])), 2);
}

#[test]
fn binary_lmo_test() {
    let o = rfw(&["lmo-test", "--instances", "20", "--grid", "5000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["passed"], true);
    assert_eq!(code(&rfw(&["lmo-test", "--manifold", "spd"])), 2);
}

#[test]
fn binary_reports_io_errors() {
    let o = rfw(&["run-experiment", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = rfw(&["run-experiment", "--max-iter", "5", "--out", "/proc/forbidden"]);
    assert_eq!(code(&o), 2);
}
