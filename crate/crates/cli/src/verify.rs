//! Registered identity and bound checks for the special functions and
//! test functions, each reported with its margin against a pinned bound.

use blowup_core::specfun::{
    bessel_k, decay_rate_ratio, envelope_ratio, ode_residual_scaled, ProfileParams,
};
use blowup_core::testfn::{
    default_t_grid, growth_exponent_fit, phi_growth_exponent, psi_growth_exponent,
    verify_conjugate_equation, verify_eigen_identity, SpatialTestFn, SupportRadius,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, OutputDir};

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Scale `ρ` by 1.01 inside the residual check (negative control).
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// Worst observed statistic; the check passes when `value <= bound`.
    pub value: f64,
    pub bound: f64,
    pub samples: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }

    pub fn margin(&self) -> f64 {
        self.bound - self.value
    }
}

type CheckFn = fn(&VerifyOptions) -> Result<(f64, usize), CliError>;

/// Name, bound and implementation of every check, in report order.
pub const REGISTRY: [(&str, f64, CheckFn); 8] = [
    ("bessel_recurrence", 1e-6, bessel_recurrence),
    ("rho_ode_residual", 1e-5, rho_ode_residual),
    ("decay_rate_limit", 1e-2, decay_rate_limit),
    ("envelope_ratio_log10_spread", 3.0, envelope_spread),
    ("eigen_identity", 1e-6, eigen_identity),
    ("conjugate_equation", 1e-5, conjugate_equation),
    ("growth_exponent_error", 0.1, growth_exponents),
    ("growth_bound_ratio_spread", 10.0, growth_bounds),
];

fn rt<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Van der Corput radical inverse; deterministic low-discrepancy samples.
fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let (mut x, mut f) = (0.0, 1.0 / base as f64);
    while i > 0 {
        x += (i % base) as f64 * f;
        i /= base;
        f /= base as f64;
    }
    x
}

fn halton(i: usize, bases: &[usize]) -> Vec<f64> {
    bases.iter().map(|&b| radical_inverse(i + 1, b)).collect()
}

fn bessel_recurrence(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let u = halton(i, &[2, 3]);
        let (nu, z) = (3.0 * u[0], 0.1 + 19.9 * u[1]);
        let h = 1e-5 * z.max(1.0);
        let fd = (bessel_k(nu, z + h).map_err(rt)? - bessel_k(nu, z - h).map_err(rt)?) / (2.0 * h);
        let exact = -bessel_k(nu + 1.0, z).map_err(rt)? + nu / z * bessel_k(nu, z).map_err(rt)?;
        worst = worst.max((fd - exact).abs() / exact.abs());
    }
    Ok((worst, 50))
}

fn profile_panel(i: usize) -> Result<ProfileParams<f64>, CliError> {
    let u = halton(i, &[2, 3, 5, 7]);
    ProfileParams::new(5.0 * u[0], 9.0 * u[1], 2.0 * u[2], 0.5 + 2.0 * u[3]).map_err(rt)
}

fn rho_ode_residual(opts: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let scale = if opts.inject_fault { 1.01 } else { 1.0 };
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let p = profile_panel(i)?;
        for t in [1.0, 2.0, 5.0, 10.0] {
            worst = worst.max(ode_residual_scaled(&p, t, scale).map_err(rt)?);
        }
    }
    Ok((worst, 80))
}

fn decay_rate_limit(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for m in [0.0, 0.5, 1.0] {
        for eta in [1.0, 2.0] {
            for mu in [0.0, 1.0] {
                let p = ProfileParams::<f64>::new(mu, 1.0, m, eta).map_err(rt)?;
                worst = worst.max((decay_rate_ratio(&p, 100.0).map_err(rt)? - 1.0).abs());
                n += 1;
            }
        }
    }
    Ok((worst, n))
}

/// `log10(max/min)` of the envelope ratio over `t ∈ [1, 50]`; infinite if
/// the tail on `[30, 50]` is not monotone.
fn envelope_spread(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    for i in 0..12 {
        let u = halton(i, &[2, 3, 5]);
        let p = ProfileParams::new(5.0 * u[0], 9.0 * u[1], 2.0 * u[2], 1.0).map_err(rt)?;
        let ratios = (1..=50)
            .map(|t| envelope_ratio(&p, t as f64))
            .collect::<Result<Vec<_>, _>>()
            .map_err(rt)?;
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        let steps: Vec<f64> = ratios[29..].windows(2).map(|w| w[1] - w[0]).collect();
        let monotone = steps.iter().all(|d| *d >= 0.0) || steps.iter().all(|d| *d <= 0.0);
        let spread = if monotone && lo > 0.0 {
            (hi / lo).log10()
        } else {
            f64::INFINITY
        };
        worst = worst.max(spread);
    }
    Ok((worst, 12))
}

const RADII: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 3.0];

fn eigen_identity(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for dim in 1..=3 {
        for (m, eta) in [(0.0, 1.0), (1.0, 1.0), (0.5, 2.0), (1.5, 0.4)] {
            let f = SpatialTestFn::new(dim, m, eta).map_err(rt)?;
            worst = worst.max(verify_eigen_identity(&f, &RADII).map_err(rt)?);
            n += RADII.len();
        }
    }
    Ok((worst, n))
}

fn conjugate_equation(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let points: Vec<(f64, f64)> = RADII
        .iter()
        .flat_map(|&r| [1.0, 2.5, 6.0].map(|t| (r, t)))
        .collect();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for dim in 1..=3 {
        for (m, eta, mu, delta) in [
            (0.0, 1.0, 0.0, 1.0),
            (1.0, 1.0, 2.0, 1.0),
            (0.5, 1.5, 3.0, 0.0),
        ] {
            let f = SpatialTestFn::new(dim, m, eta).map_err(rt)?;
            let p = ProfileParams::new(mu, delta, m, eta).map_err(rt)?;
            worst = worst.max(verify_conjugate_equation(&f, &p, &points).map_err(rt)?);
            n += points.len();
        }
    }
    Ok((worst, n))
}

/// `(N, m, r, μ)` panels for the growth-exponent fits.
pub const GROWTH_PANELS: [(u32, f64, f64, f64); 5] = [
    (1, 1.0, 2.0, 2.0),
    (2, 1.0, 1.5, 2.0),
    (3, 1.0, 1.5, 0.0),
    (2, 0.5, 2.5, 3.0),
    (3, 0.0, 1.8, 1.0),
];

/// Fitted minus closed-form exponents `(φ, ψ)` and the bound-ratio spreads
/// for one panel.
pub fn growth_panel(n: u32, m: f64, r_exp: f64, mu: f64) -> Result<[f64; 4], CliError> {
    let f = SpatialTestFn::new(n, m, 1.0).map_err(rt)?;
    let prof = ProfileParams::new(mu, 1.0, m, 1.0).map_err(rt)?;
    let sup = SupportRadius::new(1.0, m).map_err(rt)?;
    let fit = growth_exponent_fit(&f, &prof, &sup, r_exp, &default_t_grid(m)).map_err(rt)?;
    let k_phi = phi_growth_exponent(n, m, r_exp);
    let k_psi = psi_growth_exponent(n, m, r_exp, mu);
    let (phi_r, psi_r) = fit.bound_ratios(k_phi, k_psi);
    let spread = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(0.0, f64::max);
        hi / lo
    };
    Ok([
        fit.phi_exponent() - k_phi,
        fit.psi_exponent() - k_psi,
        spread(&phi_r),
        spread(&psi_r),
    ])
}

fn growth_exponents(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    for (n, m, r, mu) in GROWTH_PANELS {
        let d = growth_panel(n, m, r, mu)?;
        worst = worst.max(d[0].abs()).max(d[1].abs());
    }
    Ok((worst, 2 * GROWTH_PANELS.len()))
}

fn growth_bounds(_: &VerifyOptions) -> Result<(f64, usize), CliError> {
    let mut worst: f64 = 0.0;
    for (n, m, r, mu) in GROWTH_PANELS {
        let d = growth_panel(n, m, r, mu)?;
        worst = worst.max(d[2]).max(d[3]);
    }
    Ok((worst, 2 * GROWTH_PANELS.len()))
}

pub fn run_checks(opts: &VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
    REGISTRY
        .iter()
        .map(|&(name, bound, check)| {
            let (value, samples) = check(opts)?;
            Ok(CheckResult {
                name,
                value,
                bound,
                samples,
            })
        })
        .collect()
}

pub fn render(results: &[CheckResult]) -> String {
    results
        .iter()
        .map(|c| {
            format!(
                "{} {:<28} value={:.3e} bound={:.1e} margin={:.3e} samples={}\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.bound,
                c.margin(),
                c.samples
            )
        })
        .collect()
}

pub fn verify(
    cfg: &RunConfig,
    opts: &VerifyOptions,
    out: &mut OutputDir,
) -> Result<Vec<CheckResult>, CliError> {
    let results = run_checks(opts)?;
    out.write_csv(
        "verify.csv",
        &["check", "value", "bound", "margin", "samples", "status"],
        results.iter().map(|c| {
            [
                c.name.to_string(),
                fmt_f64(c.value),
                fmt_f64(c.bound),
                fmt_f64(c.margin()),
                c.samples.to_string(),
                if c.passed() { "pass" } else { "fail" }.to_string(),
            ]
        }),
    )?;
    out.write_manifest(
        "verify",
        &serde_json::to_value(cfg).unwrap_or(Value::Null),
        json!({ "inject_fault": opts.inject_fault }),
    )?;
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(2, 3) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fault_trips_only_the_residual_check() {
        let clean = rho_ode_residual(&VerifyOptions::default()).unwrap().0;
        let faulty = rho_ode_residual(&VerifyOptions { inject_fault: true })
            .unwrap()
            .0;
        assert!(clean <= 1e-5, "{clean}");
        assert!(faulty > 1e-5, "{faulty}");
    }

    #[test]
    fn flat_limit_panel() {
        let p = ProfileParams::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!((decay_rate_ratio(&p, 100.0).unwrap() - 1.0f64).abs() < 0.01);
    }
}
