//! The `classify`, `integrate`, `sweep` and `region-grid` experiments.

use std::fmt::Write as _;

use blowup_core::blowup_ode::{integrate, BlowupResult, Termination};
use blowup_core::fit::{linear_fit, LinearFit};
use blowup_core::regions::{
    classify_lambdas, lambda_fn, lifespan_upper_bound, omega, shifted_dimension,
    LifespanClassification, SystemParams,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{GridSpec, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_f64, fmt_opt, OutputDir};

pub const THREADS_ENV: &str = "BLOWUP_LAB_THREADS";

/// Pool sized by `BLOWUP_LAB_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn params_json(p: &SystemParams<f64>) -> Value {
    json!({
        "n": p.n, "m": p.m, "mu1": p.mu1, "mu2": p.mu2, "nu1_sq": p.nu1_sq,
        "nu2_sq": p.nu2_sq, "p": p.p, "q": p.q, "eps": p.eps, "radius": p.radius,
    })
}

fn settings_json(cfg: &RunConfig) -> Result<Value, CliError> {
    let s = cfg.settings()?;
    Ok(json!({
        "horizon": s.horizon, "thresholds": s.thresholds, "rtol": s.rtol, "atol": s.atol,
        "h_min": s.h_min, "h_init": s.h_init, "log_switch": s.log_switch,
        "max_steps": s.max_steps, "fit_window": s.fit_window,
    }))
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub params: SystemParams<f64>,
    pub classification: LifespanClassification<f64>,
    /// Upper bound on the lifespan at the configured `ε` and constant.
    pub lifespan_bound: Option<f64>,
}

impl ClassifyReport {
    pub fn summary(&self) -> String {
        let c = &self.classification;
        format!(
            "omega={} branch={} lambda1={} lambda2={} bound={} lifespan(eps={})={}",
            c.omega,
            c.branch,
            c.lambda1,
            c.lambda2,
            c.exponent,
            self.params.eps,
            self.lifespan_bound
                .map_or_else(|| "none".to_string(), |b| b.to_string())
        )
    }
}

pub fn classify(cfg: &RunConfig, out: &mut OutputDir) -> Result<ClassifyReport, CliError> {
    let params = cfg.params()?;
    let classification = omega(&params)?;
    let lifespan_bound =
        lifespan_upper_bound(&classification, params.eps, cfg.lifespan_constant()).ok();
    let c = &classification;
    let row = vec![
        params.n.to_string(),
        fmt_f64(params.m),
        fmt_f64(params.mu1),
        fmt_f64(params.mu2),
        fmt_f64(params.nu1_sq),
        fmt_f64(params.nu2_sq),
        fmt_f64(params.p),
        fmt_f64(params.q),
        fmt_f64(c.lambda1),
        fmt_f64(c.lambda2),
        fmt_f64(c.omega),
        c.branch.to_string(),
        c.exponent.to_string(),
        fmt_opt(lifespan_bound),
    ];
    out.write_csv(
        "classify.csv",
        &[
            "n",
            "m",
            "mu1",
            "mu2",
            "nu1_sq",
            "nu2_sq",
            "p",
            "q",
            "lambda1",
            "lambda2",
            "omega",
            "branch",
            "exponent",
            "lifespan_bound",
        ],
        [row],
    )?;
    out.write_manifest(
        "classify",
        &serde_json::to_value(cfg).unwrap_or(Value::Null),
        json!({ "params": params_json(&params), "lifespan_constant": cfg.lifespan_constant() }),
    )?;
    Ok(ClassifyReport {
        params,
        classification,
        lifespan_bound,
    })
}

#[derive(Debug, Clone)]
pub struct IntegrateReport {
    pub params: SystemParams<f64>,
    pub result: BlowupResult<f64>,
}

impl IntegrateReport {
    pub fn summary(&self) -> String {
        let r = &self.result;
        let mut s = format!(
            "termination={} blew_up={} reported_time={}",
            r.termination,
            r.blew_up,
            r.reported_time()
        );
        if let Some(tb) = r.t_b_estimate {
            write!(s, " t_b={tb}").ok();
        }
        for c in &r.crossings {
            if let Some(t) = c.first() {
                write!(s, " t(Y={:e})={t}", c.level).ok();
            }
        }
        s
    }
}

pub fn integrate_run(cfg: &RunConfig, out: &mut OutputDir) -> Result<IntegrateReport, CliError> {
    let params = cfg.params()?;
    let settings = cfg.settings()?;
    let result = integrate(&params, &settings)?;
    out.write_csv(
        "trajectory.csv",
        &["t", "y1", "y2"],
        result
            .trajectory
            .samples
            .iter()
            .map(|s| [fmt_f64(s.t), fmt_f64(s.y1), fmt_f64(s.y2)]),
    )?;
    out.write_csv(
        "crossings.csv",
        &["level", "t_y1", "t_y2"],
        result
            .crossings
            .iter()
            .map(|c| [fmt_f64(c.level), fmt_opt(c.y1), fmt_opt(c.y2)]),
    )?;
    out.write_csv(
        "summary.csv",
        &[
            "eps",
            "blew_up",
            "termination",
            "t_b",
            "blowup_rate",
            "reported_time",
            "accepted",
            "rejected",
        ],
        [[
            fmt_f64(params.eps),
            result.blew_up.to_string(),
            result.termination.to_string(),
            fmt_opt(result.t_b_estimate),
            fmt_opt(result.blowup_rate),
            fmt_f64(result.reported_time()),
            result.stats.accepted.to_string(),
            result.stats.rejected.to_string(),
        ]],
    )?;
    out.write_manifest(
        "integrate",
        &serde_json::to_value(cfg).unwrap_or(Value::Null),
        json!({ "params": params_json(&params), "settings": settings_json(cfg)? }),
    )?;
    Ok(IntegrateReport { params, result })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub t_b: Option<f64>,
    pub termination: Termination,
    pub reported_time: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    /// Sorted by `ε` descending.
    pub rows: Vec<SweepRow>,
    /// `ln T_b` against `ln(1/ε)`.
    pub fit_subcritical: Option<LinearFit<f64>>,
    /// `ln T_b` against `ε^{-(pq-1)}`.
    pub fit_critical: Option<LinearFit<f64>>,
    pub theoretical_omega: f64,
    pub fit_note: Option<String>,
}

impl SweepReport {
    pub fn render_fit(&self, params: &SystemParams<f64>, branch: &str) -> String {
        let blowups = self.rows.iter().filter(|r| r.t_b.is_some()).count();
        let mut s = String::new();
        writeln!(
            s,
            "theoretical_omega {} ({branch})",
            fmt_f64(self.theoretical_omega)
        )
        .ok();
        writeln!(
            s,
            "critical_exponent pq-1 = {}",
            fmt_f64(params.p * params.q - 1.0)
        )
        .ok();
        writeln!(s, "blowup_rows {blowups} of {}", self.rows.len()).ok();
        match &self.fit_subcritical {
            Some(f) => writeln!(
                s,
                "subcritical ln(T_b) = a + b ln(1/eps): slope {} intercept {} r2 {}",
                fmt_f64(f.slope),
                fmt_f64(f.intercept),
                fmt_f64(f.r_squared)
            ),
            None => writeln!(s, "subcritical fit unavailable"),
        }
        .ok();
        match &self.fit_critical {
            Some(f) => writeln!(
                s,
                "critical ln(T_b) = a + b eps^-(pq-1): slope {} r2 {}",
                fmt_f64(f.slope),
                fmt_f64(f.r_squared)
            ),
            None => writeln!(s, "critical fit unavailable"),
        }
        .ok();
        if let Some(note) = &self.fit_note {
            writeln!(s, "note {note}").ok();
        }
        s
    }
}

pub fn sweep(cfg: &RunConfig, out: &mut OutputDir) -> Result<SweepReport, CliError> {
    let base = cfg.params()?;
    let eps_list = cfg.eps_list()?;
    let settings = cfg.settings()?;
    let classification = omega(&base)?;

    let pool = thread_pool()?;
    let mut results = pool.install(|| {
        eps_list
            .par_iter()
            .map(|&eps| {
                let params = SystemParams { eps, ..base };
                integrate(&params, &settings).map(|r| SweepRow {
                    eps,
                    t_b: r.t_b_estimate.filter(|_| r.blew_up),
                    termination: r.termination,
                    reported_time: r.reported_time(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    results.sort_by(|a, b| b.eps.total_cmp(&a.eps));

    let hits: Vec<SweepRow> = results
        .iter()
        .filter(|r| r.t_b.is_some())
        .cloned()
        .collect();
    let ln_t: Vec<f64> = hits
        .iter()
        .map(|r| r.t_b.unwrap_or(f64::NAN).ln())
        .collect();
    let inv_eps: Vec<f64> = hits.iter().map(|r| (1.0 / r.eps).ln()).collect();
    let pq1 = base.p * base.q - 1.0;
    let crit_x: Vec<f64> = hits.iter().map(|r| r.eps.powf(-pq1)).collect();
    let (fit_subcritical, fit_critical, fit_note) = if hits.len() < 2 {
        (
            None,
            None,
            Some(format!("{} blow-up rows; a fit needs 2", hits.len())),
        )
    } else {
        let sub = linear_fit(&inv_eps, &ln_t)
            .map_err(|e| CliError::Runtime(format!("subcritical fit rejected: {e}")))?;
        let crit = linear_fit(&crit_x, &ln_t).ok();
        (Some(sub), crit, None)
    };
    let report = SweepReport {
        rows: results,
        fit_subcritical,
        fit_critical,
        theoretical_omega: classification.omega,
        fit_note,
    };

    out.write_csv(
        "sweep.csv",
        &["eps", "t_b", "termination", "reported_time"],
        report.rows.iter().map(|r| {
            [
                fmt_f64(r.eps),
                fmt_opt(r.t_b),
                r.termination.to_string(),
                fmt_f64(r.reported_time),
            ]
        }),
    )?;
    out.write_text(
        "fit.txt",
        &report.render_fit(&base, classification.branch.as_str()),
    )?;
    out.write_manifest(
        "sweep",
        &serde_json::to_value(cfg).unwrap_or(Value::Null),
        json!({
            "params": params_json(&base),
            "eps_list": eps_list,
            "settings": settings_json(cfg)?,
        }),
    )?;
    if hits.is_empty() {
        return Err(CliError::Runtime(format!(
            "all runs failed: no eps in {eps_list:?} blew up within the horizon"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub p: f64,
    pub q: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub omega: f64,
    pub branch: &'static str,
}

/// Rasterizes `(λ1, λ2, Ω)` over `(1, p_max] × (1, q_max]`, `p` outermost.
pub fn region_grid(cfg: &RunConfig, out: &mut OutputDir) -> Result<Vec<GridCell>, CliError> {
    // p, q and ε are swept or unused here, so any valid stand-ins do
    let mut filled = cfg.clone();
    filled.params.p = filled.params.p.or(Some(2.0));
    filled.params.q = filled.params.q.or(Some(2.0));
    filled.params.eps = filled.params.eps.or(Some(1.0));
    let base = filled.params()?;
    base.validate()?;
    let grid: GridSpec = cfg.grid()?;
    let nm = shifted_dimension(base.n, base.m);
    let ps = GridSpec::axis(grid.p_max, grid.resolution);
    let qs = GridSpec::axis(grid.q_max, grid.resolution);
    let points: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().map(move |&q| (p, q)))
        .collect();

    let pool = thread_pool()?;
    let cells = pool.install(|| {
        points
            .par_iter()
            .map(|&(p, q)| {
                let lambda1 = lambda_fn(nm + base.mu1, p, q)?;
                let lambda2 = lambda_fn(nm + base.mu2, q, p)?;
                let c = classify_lambdas(lambda1, lambda2, p, q);
                Ok(GridCell {
                    p,
                    q,
                    lambda1,
                    lambda2,
                    omega: c.omega,
                    branch: c.branch.as_str(),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    out.write_csv(
        "region_grid.csv",
        &["p", "q", "lambda1", "lambda2", "omega", "branch"],
        cells.iter().map(|c| {
            [
                fmt_f64(c.p),
                fmt_f64(c.q),
                fmt_f64(c.lambda1),
                fmt_f64(c.lambda2),
                fmt_f64(c.omega),
                c.branch.to_string(),
            ]
        }),
    )?;
    out.write_manifest(
        "region-grid",
        &serde_json::to_value(cfg).unwrap_or(Value::Null),
        json!({
            "n": base.n, "m": base.m, "mu1": base.mu1, "mu2": base.mu2,
            "grid": { "p_max": grid.p_max, "q_max": grid.q_max, "resolution": grid.resolution },
        }),
    )?;
    Ok(cells)
}
