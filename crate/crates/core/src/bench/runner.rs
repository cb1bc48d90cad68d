//! Experiment runner: rule → basis → approximant → error metrics, one CSV
//! row per `(ε, N, M)`.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{loo_optimize, Approximant, LooResult, StandardInterpolant, Truncation};
use crate::basis::WsvdBasis;
use crate::cubature::rule_with_budget;
use crate::error::{Result, WsvdError};
use crate::geometry::{halton_points, uniform_grid, Domain, Point};
use crate::kernels::Kernel;

use super::config::{BasisKind, ExperimentConfig, PointKind, TruncationPlan};
use super::metrics::{error_stats, eval_grid};

/// One line of the results CSV. Columns follow the field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub kernel: String,
    pub domain: String,
    pub testfn: String,
    pub rmse: Option<f64>,
    pub max_abs_err: Option<f64>,
    pub trace_residual: Option<f64>,
    pub gram_residual: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub runtime_ms: f64,
    pub error: String,
}

impl ResultRow {
    fn failed(cfg: &ExperimentConfig, eps: f64, n: usize, err: &WsvdError) -> Self {
        ResultRow {
            n,
            m: 0,
            eps,
            kernel: cfg.kernel.name().into(),
            domain: cfg.domain.name().into(),
            testfn: cfg.testfn.name().into(),
            rmse: None,
            max_abs_err: None,
            trace_residual: None,
            gram_residual: None,
            sigma_min: None,
            sigma_max: None,
            runtime_ms: 0.0,
            error: err.to_string(),
        }
    }

    pub fn is_error(&self) -> bool {
        !self.error.is_empty()
    }
}

/// Runs every `(ε, N)` job of the config. Jobs run concurrently; rows come
/// back in config order. Failures become rows with a non-empty `error`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let grid = eval_grid(&cfg.domain, cfg.grid)?;
    let exact: Vec<f64> = grid.iter().map(|p| cfg.testfn.eval(p)).collect();
    let jobs: Vec<(f64, usize)> = cfg
        .eps
        .iter()
        .flat_map(|&e| cfg.n.iter().map(move |&n| (e, n)))
        .collect();
    let rows: Vec<Vec<ResultRow>> = jobs
        .par_iter()
        .map(|&(eps, n)| {
            let result = match cfg.basis {
                BasisKind::Wsvd => wsvd_rows(cfg, eps, n, &grid, &exact),
                BasisKind::Standard => standard_row(cfg, eps, n, &grid, &exact).map(|r| vec![r]),
            };
            result.unwrap_or_else(|err| vec![ResultRow::failed(cfg, eps, n, &err)])
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn elapsed_ms(cfg: &ExperimentConfig, start: Instant) -> f64 {
    if cfg.timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

fn wsvd_rows(cfg: &ExperimentConfig, eps: f64, budget: usize, grid: &[Point], exact: &[f64]) -> Result<Vec<ResultRow>> {
    let start = Instant::now();
    let kernel = Kernel::new(cfg.kernel, eps)?;
    let rule = rule_with_budget(&cfg.domain, cfg.rule, budget)?;
    let basis = Arc::new(WsvdBasis::build(kernel, rule)?);
    let full = Approximant::interpolate(Arc::clone(&basis), |p| cfg.testfn.eval(p))?;
    let u_grid = basis.eval_matrix(grid);
    let trace_residual = basis.trace_residual();
    let gram_residual = basis.gram_residual();
    let sigma_max = basis.sigma2()[0].sqrt();
    let sigma_min = basis.sigma2()[basis.n_active().max(1) - 1].sqrt();
    let build_ms = elapsed_ms(cfg, start);

    let policies: Vec<Truncation> = match &cfg.truncation {
        TruncationPlan::Full => vec![Truncation::Order(full.m_active())],
        TruncationPlan::Orders(orders) => orders.iter().map(|&m| Truncation::Order(m)).collect(),
        TruncationPlan::SigmaTol(t) => vec![Truncation::SigmaTol(*t)],
    };
    policies
        .into_iter()
        .map(|policy| {
            let row_start = Instant::now();
            let approx = full.truncate(policy)?;
            let m = approx.m_active();
            let coeffs = approx.coeffs();
            let values: Vec<f64> = (0..grid.len())
                .map(|i| (0..m).map(|j| coeffs[j] * u_grid[(i, j)]).sum())
                .collect();
            let (rmse, max_abs) = error_stats(&values, exact)?;
            Ok(ResultRow {
                n: basis.len(),
                m,
                eps,
                kernel: cfg.kernel.name().into(),
                domain: cfg.domain.name().into(),
                testfn: cfg.testfn.name().into(),
                rmse: Some(rmse),
                max_abs_err: Some(max_abs),
                trace_residual: Some(trace_residual),
                gram_residual: Some(gram_residual),
                sigma_min: Some(sigma_min),
                sigma_max: Some(sigma_max),
                runtime_ms: build_ms + elapsed_ms(cfg, row_start),
                error: String::new(),
            })
        })
        .collect()
}

/// Centers for the translate basis: a grid with about `budget` points inside
/// the domain, or the first `budget` Halton points.
pub fn standard_points(domain: &Domain, kind: PointKind, budget: usize) -> Result<Vec<Point>> {
    match kind {
        PointKind::Halton => halton_points(budget, domain),
        PointKind::Grid => {
            // closest filtered size to the budget, smallest grid on ties
            let mut best: Vec<Point> = Vec::new();
            for m in 1.. {
                let points = uniform_grid(m, domain)?;
                let reached = points.len() >= budget;
                if best.is_empty() || points.len().abs_diff(budget) < best.len().abs_diff(budget) {
                    best = points;
                }
                if reached {
                    break;
                }
            }
            Ok(best)
        }
    }
}

fn standard_row(cfg: &ExperimentConfig, eps: f64, budget: usize, grid: &[Point], exact: &[f64]) -> Result<ResultRow> {
    let start = Instant::now();
    let kernel = Kernel::new(cfg.kernel, eps)?;
    let centers = standard_points(&cfg.domain, cfg.points, budget)?;
    let samples: Vec<f64> = centers.iter().map(|p| cfg.testfn.eval(p)).collect();
    let interp = StandardInterpolant::new(kernel, &centers, &samples)?;
    let values = interp.eval_many(grid);
    let (rmse, max_abs) = error_stats(&values, exact)?;
    Ok(ResultRow {
        n: centers.len(),
        m: centers.len(),
        eps,
        kernel: cfg.kernel.name().into(),
        domain: cfg.domain.name().into(),
        testfn: cfg.testfn.name().into(),
        rmse: Some(rmse),
        max_abs_err: Some(max_abs),
        trace_residual: None,
        gram_residual: None,
        sigma_min: None,
        sigma_max: None,
        runtime_ms: elapsed_ms(cfg, start),
        error: String::new(),
    })
}

pub fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// `(j, σⱼ²)` rows, `j` starting at 1, for the first `ε` and `N` of the
/// config.
pub fn spectrum(cfg: &ExperimentConfig) -> Result<Vec<(usize, f64)>> {
    cfg.validate()?;
    let kernel = Kernel::new(cfg.kernel, cfg.eps[0])?;
    let rule = rule_with_budget(&cfg.domain, cfg.rule, cfg.n[0])?;
    let basis = WsvdBasis::build(kernel, rule)?;
    Ok(basis.sigma2().iter().enumerate().map(|(j, &s)| (j + 1, s)).collect())
}

pub fn write_spectrum<W: Write>(rows: &[(usize, f64)], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["j", "sigma2"])?;
    for (j, s) in rows {
        writer.serialize((j, s))?;
    }
    writer.flush()?;
    Ok(())
}

/// Leave-one-out search over `eps-grid` (or `eps` when no grid is given)
/// on translate-basis centers.
pub fn loo(cfg: &ExperimentConfig) -> Result<LooResult> {
    cfg.validate()?;
    let candidates = cfg.eps_grid.clone().unwrap_or_else(|| cfg.eps.clone());
    let centers = standard_points(&cfg.domain, cfg.points, cfg.n[0])?;
    let samples: Vec<f64> = centers.iter().map(|p| cfg.testfn.eval(p)).collect();
    loo_optimize(cfg.kernel, &candidates, &centers, &samples)
}

pub fn write_loo<W: Write>(result: &LooResult, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["eps", "score"])?;
    for (e, s) in &result.scores {
        writer.serialize((e, s))?;
    }
    writer.flush()?;
    Ok(())
}
