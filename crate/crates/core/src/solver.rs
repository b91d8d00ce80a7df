//! Riemannian Frank-Wolfe.
//!
//! Each iteration queries the linear oracle with the negative gradient,
//! measures the dual gap `⟨−∇f(x), log_x v⟩` and moves along the geodesic
//! from `x` towards `v`.

use std::io::Write;

use log::{debug, info};
use serde::Serialize;

use crate::convexity::ConvexSet;
use crate::error::{Error, Result};
use crate::manifold::{geodesic, Ambient, Manifold};
use crate::objectives::Objective;
use crate::sets::scalar::{minimize_1d, DEFAULT_TOL};

pub const DEFAULT_GAP_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// Minimizer of the smoothness model `s g + s² (L/2) d²` over `[0, 1]`.
    ShortStep,
    /// `2 / (t + 2)`.
    FixedSchedule,
    /// Exact minimization of `f` along the geodesic segment.
    ExactLineSearch,
}

impl std::str::FromStr for StepRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "short-step" | "short" => Ok(StepRule::ShortStep),
            "fixed-schedule" | "fixed" => Ok(StepRule::FixedSchedule),
            "exact-line-search" | "exact" => Ok(StepRule::ExactLineSearch),
            other => Err(Error::Config(format!("unknown step rule `{other}`"))),
        }
    }
}

/// Minimize `f` over `set`, where `f` is `l`-smooth along geodesics.
pub struct RfwProblem<M: Manifold, O, S> {
    pub objective: O,
    pub set: S,
    pub l: f64,
    pub x0: M::Point,
}

impl<M: Manifold, O: Objective<M>, S: ConvexSet<M>> RfwProblem<M, O, S> {
    pub fn new(objective: O, set: S, l: f64, x0: M::Point) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Config(format!("smoothness constant must be positive, got {l}")));
        }
        if !set.has_lmo() {
            return Err(Error::Config("the feasible set has no linear oracle".into()));
        }
        if !set.contains(&x0) {
            return Err(Error::Config(format!("starting point is infeasible (slack {})", set.slack(&x0))));
        }
        Ok(Self { objective, set, l, x0 })
    }

    pub fn manifold(&self) -> &M {
        self.set.manifold()
    }
}

/// Frank-Wolfe vertex `v = argmax_{z ∈ C} ⟨−∇f(x), log_x z⟩` and the dual gap.
/// A vanishing gradient returns `(x, 0)`.
pub fn fw_vertex<M: Manifold, O: Objective<M>, S: ConvexSet<M>>(problem: &RfwProblem<M, O, S>, x: &M::Point) -> Result<(M::Point, f64)> {
    let g = problem.objective.grad(x)?;
    fw_vertex_from_grad(problem, x, &g)
}

fn fw_vertex_from_grad<M: Manifold, O: Objective<M>, S: ConvexSet<M>>(
    problem: &RfwProblem<M, O, S>,
    x: &M::Point,
    g: &M::Point,
) -> Result<(M::Point, f64)> {
    let m = problem.manifold();
    if m.norm(x, g) == 0.0 {
        return Ok((x.clone(), 0.0));
    }
    let w = g.scaled(-1.0);
    let v = problem.set.lmo(&w, x)?;
    let gap = m.inner(x, &w, &m.log(x, &v)?);
    Ok((v, gap))
}

/// `clamp(gap / (L d²), 0, 1)`, and 0 when `d = 0`.
pub fn short_step(dual_gap: f64, d_xv: f64, l: f64) -> f64 {
    if d_xv <= 0.0 {
        return 0.0;
    }
    (dual_gap / (l * d_xv * d_xv)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterRecord {
    pub iter: usize,
    pub f: f64,
    pub dual_gap: f64,
    pub step: f64,
    pub dist_xv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "message")]
pub enum Status {
    Converged,
    MaxIter,
    Failed(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct RfwTrace<P> {
    pub records: Vec<IterRecord>,
    pub status: Status,
    #[serde(skip)]
    pub iterates: Vec<P>,
}

impl<P> RfwTrace<P> {
    pub fn final_gap(&self) -> Option<f64> {
        self.records.last().map(|r| r.dual_gap)
    }

    pub fn final_value(&self) -> Option<f64> {
        self.records.last().map(|r| r.f)
    }

    pub const CSV_HEADER: &'static str = "iter,f,dual_gap,step,dist_xv";

    /// One row per iteration, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(out, "{},{:.16e},{:.16e},{:.16e},{:.16e}", r.iter, r.f, r.dual_gap, r.step, r.dist_xv)?;
        }
        Ok(())
    }
}

/// Runs Frank-Wolfe from `problem.x0` until the dual gap is at most `gap_tol`
/// or `max_iter` iterations have been recorded.
///
/// Iteration `t` records `f(x_t)`, the gap at `x_t`, the step taken and
/// `d(x_t, v_t)`; the iterates `x_0, x_1, …` are kept alongside. Errors stop
/// the run and are reported through [`Status::Failed`] with the partial
/// trace.
pub fn rfw_run<M: Manifold, O: Objective<M>, S: ConvexSet<M>>(
    problem: &RfwProblem<M, O, S>,
    rule: StepRule,
    max_iter: usize,
    gap_tol: f64,
) -> RfwTrace<M::Point> {
    let mut trace = RfwTrace { records: Vec::new(), status: Status::MaxIter, iterates: vec![problem.x0.clone()] };
    let mut x = problem.x0.clone();
    for t in 0..max_iter {
        match rfw_step(problem, &x, t, rule, gap_tol) {
            Ok((rec, next)) => {
                debug!("iter {t}: f = {:.6e}, gap = {:.3e}, step = {:.3e}", rec.f, rec.dual_gap, rec.step);
                trace.records.push(rec);
                match next {
                    Some(next) => {
                        x = next;
                        trace.iterates.push(x.clone());
                    }
                    None => {
                        trace.status = Status::Converged;
                        break;
                    }
                }
            }
            Err(e) => {
                trace.status = Status::Failed(e.to_string());
                break;
            }
        }
    }
    info!("rfw finished after {} iterations: {:?}", trace.records.len(), trace.status);
    trace
}

fn rfw_step<M: Manifold, O: Objective<M>, S: ConvexSet<M>>(
    problem: &RfwProblem<M, O, S>,
    x: &M::Point,
    t: usize,
    rule: StepRule,
    gap_tol: f64,
) -> Result<(IterRecord, Option<M::Point>)> {
    let m = problem.manifold();
    let (f, g) = problem.objective.value_grad(x)?;
    let (v, gap) = fw_vertex_from_grad(problem, x, &g)?;
    let d = m.dist(x, &v);
    if gap <= gap_tol {
        return Ok((IterRecord { iter: t, f, dual_gap: gap, step: 0.0, dist_xv: d }, None));
    }
    let s = match rule {
        StepRule::ShortStep => short_step(gap, d, problem.l),
        StepRule::FixedSchedule => 2.0 / (t as f64 + 2.0),
        StepRule::ExactLineSearch => {
            let obj = &problem.objective;
            let along = |s: f64| geodesic(m, x, &v, s).map(|p| obj.value(&p)).unwrap_or(f64::NAN);
            minimize_1d(along, 0.0, 1.0, DEFAULT_TOL)?.0
        }
    };
    let next = geodesic(m, x, &v, s)?;
    Ok((IterRecord { iter: t, f, dual_gap: gap, step: s, dist_xv: d }, Some(next)))
}

/// Options of [`contraction_check`].
#[derive(Debug, Clone, Copy)]
pub struct ContractionOptions {
    /// Allowed excess of `h_{t+1}/h_t` over the factor.
    pub ratio_slack: f64,
    /// Iterations with `h_t` below this are skipped: their ratios are
    /// dominated by the error in `f*`.
    pub h_floor: f64,
    /// Only iterations with `d(x_t, v_t)² ≤ burn_in_d2` are checked.
    pub burn_in_d2: Option<f64>,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        Self { ratio_slack: 1e-9, h_floor: 1e-9, burn_in_d2: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    /// `max{1/2, 1 − αc/(2L)}`
    pub factor: f64,
    pub checked: usize,
    pub max_ratio: f64,
    /// Iterations `t` where `h_{t+1} > (factor + slack) h_t`.
    pub violations: Vec<usize>,
    pub passed: bool,
}

/// Checks `h_{t+1} ≤ max{1/2, 1 − αc/(2L)} h_t` with `h_t = f(x_t) − f*`
/// on consecutive trace records.
pub fn contraction_check<P>(trace: &RfwTrace<P>, alpha: f64, c: f64, l: f64, fstar: f64, opts: ContractionOptions) -> ContractionReport {
    let factor = 0.5f64.max(1.0 - alpha * c / (2.0 * l));
    let mut checked = 0;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for pair in trace.records.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let h0 = a.f - fstar;
        let h1 = b.f - fstar;
        if h0 < opts.h_floor {
            continue;
        }
        if let Some(thr) = opts.burn_in_d2 {
            if a.dist_xv * a.dist_xv > thr {
                continue;
            }
        }
        checked += 1;
        let ratio = h1 / h0;
        max_ratio = max_ratio.max(ratio);
        if ratio > factor + opts.ratio_slack {
            violations.push(a.iter);
        }
    }
    ContractionReport { factor, checked, max_ratio, passed: violations.is_empty(), violations }
}

/// Least-squares fit of `ln gap` against the iteration index.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateFit {
    pub first_iter: usize,
    pub last_iter: usize,
    pub points: usize,
    pub slope: f64,
    /// `exp(slope)`: the fitted per-iteration contraction of the gap.
    pub rate: f64,
    pub r_squared: f64,
}

/// Fits `ln gap` over `records`, skipping non-positive gaps.
pub fn fit_log_gap(records: &[IterRecord]) -> Option<RateFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.dual_gap > 0.0)
        .map(|r| (r.iter as f64, r.dual_gap.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some(RateFit {
        first_iter: records.first()?.iter,
        last_iter: records.last()?.iter,
        points: pts.len(),
        slope,
        rate: slope.exp(),
        r_squared,
    })
}

/// Tail-rate fit: the last half of the iterations whose gap is above
/// `1e2 · ε`.
pub fn tail_rate<P>(trace: &RfwTrace<P>) -> Option<RateFit> {
    let usable: Vec<IterRecord> = trace.records.iter().copied().filter(|r| r.dual_gap > 1e2 * f64::EPSILON).collect();
    let start = usable.len() / 2;
    fit_log_gap(&usable[start..])
}
