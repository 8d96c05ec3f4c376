//! Special functions behind the test-function construction: the modified
//! Bessel functions `K_ν` and `I_0`, the Tricomi phase `φ_m`, the time
//! profile `ρ^η` and the coefficient `Γ^η`.
//!
//! `K_ν(z)` is evaluated from its integral representation
//! `∫_0^∞ exp(-z cosh ζ) cosh(νζ) dζ` by tanh-sinh quadrature on a truncated
//! range. Internally everything works with the exponentially scaled
//! `e^z K_ν(z)` so the profile can be followed deep into the tail where
//! `K_ν` itself underflows.

use thiserror::Error;

use crate::quad::{tanh_sinh, Quadrature};
use crate::scalar::{as_f64, lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("quadrature for K_{nu}({z}) reached relative error {achieved:e} > {tolerance:e}")]
    Accuracy {
        nu: f64,
        z: f64,
        achieved: f64,
        tolerance: f64,
    },
}

/// Order and argument of a `K_ν(z)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselArg<T> {
    pub order: T,
    pub z: T,
}

impl<T: Real> BesselArg<T> {
    pub fn new(order: T, z: T) -> Result<Self, SpecFunError> {
        if !(order >= T::zero()) || !order.is_finite() {
            return Err(SpecFunError::Domain(format!(
                "Bessel order must be finite and >= 0, got {}",
                as_f64(order)
            )));
        }
        if !(z > T::zero()) || !z.is_finite() {
            return Err(SpecFunError::Domain(format!(
                "Bessel argument must be finite and > 0, got {}",
                as_f64(z)
            )));
        }
        Ok(Self { order, z })
    }
}

/// `ln cosh x` without overflow.
fn ln_cosh<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (-(a + a)).exp().ln_1p() - T::LN_2()
}

/// Upper limit `Z` beyond which the scaled integrand
/// `exp(-z(cosh ζ - 1)) cosh(νζ)` has dropped below `1e-18` of its peak.
fn truncation_point<T: Real>(nu: T, z: T) -> T {
    let cut: T = lit(1e-18_f64.ln().abs());
    let log_integrand = |s: T| -z * (s.cosh() - T::one()) + ln_cosh(nu * s);
    let slope = |s: T| -z * s.sinh() + nu * (nu * s).tanh();

    let mut peak = T::zero();
    let mut lo = T::zero();
    let mut hi = (T::one() / z.sqrt()).min(lit(0.5));
    loop {
        let g = log_integrand(hi);
        peak = peak.max(g);
        if g < peak - cut && slope(hi) < T::zero() {
            break;
        }
        lo = hi;
        hi = hi * lit(1.5);
    }
    // the integrand is decreasing on [lo, hi] below the peak; tighten
    for _ in 0..60 {
        let mid = (lo + hi) * lit(0.5);
        if log_integrand(mid) < peak - cut && slope(mid) < T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    hi
}

/// `e^z K_ν(z)` with its quadrature error estimate.
pub fn bessel_k_scaled<T: Real>(nu: T, z: T) -> Result<Quadrature<T>, SpecFunError> {
    let arg = BesselArg::new(nu, z)?;
    let (nu, z) = (arg.order, arg.z);
    let upper = truncation_point(nu, z);
    let integrand = |s: T| {
        // cosh(s) - 1 = 2 sinh^2(s/2), exact near s = 0
        let sh = (s * lit(0.5)).sinh();
        (-z * (sh * sh) * lit(2.0) + ln_cosh(nu * s)).exp()
    };
    let tol = T::quad_tolerance();
    let q = tanh_sinh(integrand, T::zero(), upper, tol, 12);
    if !q.value.is_finite() {
        return Err(SpecFunError::Range(format!(
            "e^z K_{}({}) is not representable",
            as_f64(nu),
            as_f64(z)
        )));
    }
    if q.rel_error() > tol {
        return Err(SpecFunError::Accuracy {
            nu: as_f64(nu),
            z: as_f64(z),
            achieved: as_f64(q.rel_error()),
            tolerance: as_f64(tol),
        });
    }
    Ok(q)
}

/// Modified Bessel function of the second kind `K_ν(z)`, `ν ≥ 0`, `z > 0`.
///
/// Underflows to zero once `z` exceeds the exponent range; use
/// [`ln_bessel_k`] there.
pub fn bessel_k<T: Real>(nu: T, z: T) -> Result<T, SpecFunError> {
    let q = bessel_k_scaled(nu, z)?;
    Ok(q.value * (-z).exp())
}

/// `ln K_ν(z)`, finite far beyond the point where `K_ν(z)` underflows.
pub fn ln_bessel_k<T: Real>(nu: T, z: T) -> Result<T, SpecFunError> {
    let q = bessel_k_scaled(nu, z)?;
    Ok(q.value.ln() - z)
}

/// `ln I_0(x)` for `x ≥ 0` from the power series `Σ (x/2)^{2k} / (k!)^2`,
/// summed in log space so large arguments do not overflow.
pub fn ln_bessel_i0<T: Real>(x: T) -> T {
    let x = x.abs();
    if x == T::zero() {
        return T::zero();
    }
    let two_ln_half_x = (x * lit(0.5)).ln() * lit(2.0);
    let cut: T = lit(40.0);
    let mut logs = vec![T::zero()];
    let mut current = T::zero();
    let mut best = T::zero();
    let mut k = 1usize;
    loop {
        let kf: T = lit(k as f64);
        current = current + two_ln_half_x - kf.ln() * lit(2.0);
        logs.push(current);
        best = best.max(current);
        // terms are unimodal in k; stop well past the peak
        if current < best - cut && lit::<T>(k as f64) > x {
            break;
        }
        k += 1;
    }
    let sum = logs.iter().fold(T::zero(), |s, &l| s + (l - best).exp());
    best + sum.ln()
}

/// Modified Bessel function of the first kind `I_0(x)`.
pub fn bessel_i0<T: Real>(x: T) -> T {
    ln_bessel_i0(x).exp()
}

/// Tricomi phase `φ_m(t) = t^{1+m} / (1+m)`.
pub fn phi_m<T: Real>(m: T, t: T) -> Result<T, SpecFunError> {
    if !(m >= T::zero()) || !(t > T::zero()) {
        return Err(SpecFunError::Domain(format!(
            "phi_m requires m >= 0 and t > 0, got m={}, t={}",
            as_f64(m),
            as_f64(t)
        )));
    }
    let v = t.powf(T::one() + m) / (T::one() + m);
    if !v.is_finite() {
        return Err(SpecFunError::Range(format!(
            "phi_m({}, {}) overflows",
            as_f64(m),
            as_f64(t)
        )));
    }
    Ok(v)
}

/// Parameters of the time profile `ρ^η`: damping `μ`, discriminant `δ`,
/// Tricomi exponent `m` and frequency `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams<T> {
    pub mu: T,
    pub delta: T,
    pub m: T,
    pub eta: T,
}

impl<T: Real> ProfileParams<T> {
    pub fn new(mu: T, delta: T, m: T, eta: T) -> Result<Self, SpecFunError> {
        let p = Self { mu, delta, m, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SpecFunError> {
        let checks = [
            (self.mu >= T::zero() && self.mu.is_finite(), "mu >= 0"),
            (
                self.delta >= T::zero() && self.delta.is_finite(),
                "delta >= 0",
            ),
            (self.m >= T::zero() && self.m.is_finite(), "m >= 0"),
            (self.eta > T::zero() && self.eta.is_finite(), "eta > 0"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(SpecFunError::Domain(format!(
                "profile parameters violate {what}: {self:?}"
            ))),
            None => Ok(()),
        }
    }

    /// Bessel order `√δ / (2(1+m))`.
    pub fn bessel_order(&self) -> T {
        self.delta.sqrt() / ((T::one() + self.m) * lit(2.0))
    }

    /// Mass `ν²` recovered from `δ = (μ-1)² - 4ν²`.
    pub fn nu_sq(&self) -> T {
        let s = self.mu - T::one();
        (s * s - self.delta) * lit(0.25)
    }
}

/// Value and derivative of `ρ^η` at time `t`, in plain and logarithmic form.
///
/// `value` and `derivative` may underflow to zero in the exponential tail;
/// `ln_value` and `log_derivative` (`ρ'/ρ`) stay finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEval<T> {
    pub t: T,
    pub value: T,
    pub derivative: T,
    pub ln_value: T,
    pub log_derivative: T,
    pub rel_accuracy: T,
}

/// `ρ^η(t) = (ηt)^{(μ+1)/2} K_ν(φ_m(ηt))` with `ν = √δ/(2(1+m))`.
///
/// The derivative comes from `K_ν' = -K_{ν+1} + (ν/z) K_ν` and the chain
/// rule, never from differencing.
pub fn rho<T: Real>(params: &ProfileParams<T>, t: T) -> Result<ProfileEval<T>, SpecFunError> {
    params.validate()?;
    if !(t >= T::one()) || !t.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "rho is defined for t >= 1, got {}",
            as_f64(t)
        )));
    }
    let nu = params.bessel_order();
    let s = params.eta * t;
    let z = phi_m(params.m, s)?;
    let k0 = bessel_k_scaled(nu, z)?;
    let k1 = bessel_k_scaled(nu + T::one(), z)?;

    let half_exp = (params.mu + T::one()) * lit(0.5);
    let ln_value = half_exp * s.ln() + k0.value.ln() - z;
    let ratio = k1.value / k0.value;
    let log_derivative = half_exp / t + params.eta * s.powf(params.m) * (nu / z - ratio);
    let value = ln_value.exp();
    Ok(ProfileEval {
        t,
        value,
        derivative: value * log_derivative,
        ln_value,
        log_derivative,
        rel_accuracy: k0.rel_error().max(k1.rel_error()),
    })
}

/// `Γ^η(t) = μ/t - 2 ρ'(t)/ρ(t)`.
pub fn gamma_eta<T: Real>(params: &ProfileParams<T>, t: T) -> Result<T, SpecFunError> {
    let ev = rho(params, t)?;
    Ok(params.mu / t - ev.log_derivative * lit(2.0))
}

/// `ρ^η(t) / ((ηt)^{(μ-m)/2} e^{-φ_m(ηt)})`, the ratio that two-sided
/// envelope bounds keep between positive constants.
pub fn envelope_ratio<T: Real>(params: &ProfileParams<T>, t: T) -> Result<T, SpecFunError> {
    let ev = rho(params, t)?;
    let s = params.eta * t;
    let envelope = (params.mu - params.m) * lit(0.5) * s.ln() - phi_m(params.m, s)?;
    Ok((ev.ln_value - envelope).exp())
}

/// `(ρ'(t) / (t^m ρ(t))) / (-η^{m+1})`, which tends to 1 as `t → ∞`.
pub fn decay_rate_ratio<T: Real>(params: &ProfileParams<T>, t: T) -> Result<T, SpecFunError> {
    let ev = rho(params, t)?;
    let target = -params.eta.powf(params.m + T::one());
    Ok(ev.log_derivative / t.powf(params.m) / target)
}

/// Relative residual of the profile ODE
/// `ρ'' - (μ/t ρ)' + (ν²/t² - η^{2m+2} t^{2m}) ρ = 0` at `t`.
///
/// `ρ''` is a central difference of the analytic `ρ'`; every term is divided
/// by `ρ(t)` so the check works in the underflow region. The result is the
/// residual divided by the largest term.
pub fn ode_residual<T: Real>(params: &ProfileParams<T>, t: T) -> Result<T, SpecFunError> {
    ode_residual_scaled(params, t, T::one())
}

/// [`ode_residual`] with the central value `ρ(t)` multiplied by
/// `value_scale`; a scale other than one is a deliberate fault used as a
/// negative control.
pub fn ode_residual_scaled<T: Real>(
    params: &ProfileParams<T>,
    t: T,
    value_scale: T,
) -> Result<T, SpecFunError> {
    let center = rho(params, t)?;
    let local_scale = t.min(T::one() / center.log_derivative.abs());
    let mut h = local_scale * lit(1e-4);
    if t - h < T::one() {
        h = (t - T::one()).max(T::zero());
    }
    // forward difference at the left edge of the domain
    let (lo, hi, span) = if h <= T::zero() {
        let step = local_scale * lit(1e-4);
        (center, rho(params, t + step)?, step)
    } else {
        (rho(params, t - h)?, rho(params, t + h)?, h + h)
    };
    let rel = |ev: &ProfileEval<T>| (ev.ln_value - center.ln_value).exp();
    let mut second = (hi.log_derivative * rel(&hi) - lo.log_derivative * rel(&lo)) / span;
    if lo.t == center.t {
        // one-sided: correct to second order using the next point
        let far = rho(params, t + span + span)?;
        let d0 = center.log_derivative;
        let d1 = hi.log_derivative * rel(&hi);
        let d2 = far.log_derivative * rel(&far);
        second = (-d2 + d1 * lit(4.0) - d0 * lit(3.0)) / (span + span);
    }
    let second = second / value_scale;
    let first = center.log_derivative / value_scale;

    let mu_t = params.mu / t;
    let terms = [
        second,
        -mu_t * first,
        params.mu / (t * t),
        params.nu_sq() / (t * t),
        -params.eta.powf(params.m * lit(2.0) + lit(2.0)) * t.powf(params.m * lit(2.0)),
    ];
    let sum = terms.iter().fold(T::zero(), |s, &x| s + x);
    let largest = terms.iter().fold(T::zero(), |s, &x| s.max(x.abs()));
    Ok(sum.abs() / largest)
}
