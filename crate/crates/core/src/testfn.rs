//! Spatial test functions `φ^η`, space-time test functions
//! `ψ^η = ρ^η(t) φ^η(x)`, and numerical checks of the identities and
//! integral growth estimates they satisfy.

use thiserror::Error;

use crate::fit::{linear_fit, FitError, LinearFit};
use crate::quad::gauss_kronrod;
use crate::scalar::{as_f64, lit, Real};
use crate::specfun::{ln_bessel_i0, phi_m, rho, ProfileParams, SpecFunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TestFnError {
    #[error("unsupported dimension N = {0}; only N in {{1, 2, 3}} has an evaluator")]
    UnsupportedDimension(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("exponent fit failed: {0}")]
    FitFailure(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Radially symmetric solution of `Δφ = η^{2m+2} φ` in dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialTestFn<T> {
    pub n: u32,
    pub m: T,
    pub eta: T,
}

impl<T: Real> SpatialTestFn<T> {
    pub fn new(n: u32, m: T, eta: T) -> Result<Self, TestFnError> {
        if !(1..=3).contains(&n) {
            return Err(TestFnError::UnsupportedDimension(n));
        }
        if !(m >= T::zero()) || !(eta > T::zero()) || !m.is_finite() || !eta.is_finite() {
            return Err(TestFnError::Domain(format!(
                "need m >= 0 and eta > 0, got m={}, eta={}",
                as_f64(m),
                as_f64(eta)
            )));
        }
        Ok(Self { n, m, eta })
    }

    /// Exponential rate `η^{1+m}`.
    pub fn rate(&self) -> T {
        self.eta.powf(T::one() + self.m)
    }

    /// Eigenvalue `η^{2m+2}` of the Laplacian.
    pub fn eigenvalue(&self) -> T {
        let a = self.rate();
        a * a
    }

    /// Surface measure `|S^{N-1}|` (2 for `N = 1`).
    pub fn sphere_measure(&self) -> T {
        match self.n {
            1 => lit(2.0),
            2 => T::PI() * lit(2.0),
            _ => T::PI() * lit(4.0),
        }
    }

    /// `ln φ^η(r)` at radius `r = |x|`.
    pub fn ln_value(&self, r: T) -> T {
        let x = self.rate() * r.abs();
        match self.n {
            1 => x + (-(x + x)).exp().ln_1p(),
            2 => (T::PI() * lit(2.0)).ln() + ln_bessel_i0(x),
            _ => {
                let shape = if x == T::zero() {
                    T::zero()
                } else if x < lit(0.5) {
                    (x.sinh() / x).ln()
                } else {
                    x + (-(-(x + x)).exp()).ln_1p() - (x + x).ln()
                };
                (T::PI() * lit(4.0)).ln() + shape
            }
        }
    }

    /// `φ^η(r)`: `2cosh(ar)`, `2π I_0(ar)` or `4π sinh(ar)/(ar)` for
    /// `N = 1, 2, 3` with `a = η^{1+m}`.
    pub fn value(&self, r: T) -> T {
        self.ln_value(r).exp()
    }
}

/// `φ^η(r)` for a test function; errors for unsupported `N`.
pub fn phi_eta<T: Real>(func: &SpatialTestFn<T>, r: T) -> Result<T, TestFnError> {
    SpatialTestFn::new(func.n, func.m, func.eta)?;
    if !(r >= T::zero()) {
        return Err(TestFnError::Domain(format!(
            "radius must be >= 0, got {}",
            as_f64(r)
        )));
    }
    Ok(func.value(r))
}

/// Radius `R + φ_m(t) - φ_m(1)` of the support of solutions at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportRadius<T> {
    pub r0: T,
    pub m: T,
}

impl<T: Real> SupportRadius<T> {
    pub fn new(r0: T, m: T) -> Result<Self, TestFnError> {
        if !(r0 > T::zero()) || !(m >= T::zero()) {
            return Err(TestFnError::Domain(format!(
                "need R > 0 and m >= 0, got R={}, m={}",
                as_f64(r0),
                as_f64(m)
            )));
        }
        Ok(Self { r0, m })
    }

    pub fn radius(&self, t: T) -> Result<T, TestFnError> {
        if !(t >= T::one()) {
            return Err(TestFnError::Domain(format!(
                "support radius needs t >= 1, got {}",
                as_f64(t)
            )));
        }
        Ok(self.r0 + phi_m(self.m, t)? - phi_m(self.m, T::one())?)
    }
}

/// First and second derivative of `f = exp(ln_f)` divided by `f`, from
/// differences of `ln_f`. Central when `x - h >= lower`, otherwise a
/// second-order forward stencil.
fn log_differences<T, F>(ln_f: F, x: T, h: T, lower: T) -> Result<(T, T), TestFnError>
where
    T: Real,
    F: Fn(T) -> Result<T, TestFnError>,
{
    let base = ln_f(x)?;
    let em1 = |y: T| -> Result<T, TestFnError> { Ok((ln_f(y)? - base).exp_m1()) };
    if x - h >= lower {
        let (up, down) = (em1(x + h)?, em1(x - h)?);
        Ok(((up - down) / (h + h), (up + down) / (h * h)))
    } else {
        let (e1, e2, e3) = (em1(x + h)?, em1(x + h + h)?, em1(x + h * lit(3.0))?);
        let first = (e1 * lit(4.0) - e2) / (h + h);
        let second = (e2 * lit(4.0) - e1 * lit(5.0) - e3) / (h * h);
        Ok((first, second))
    }
}

/// Maximum over `r_samples` of `|Δφ - η^{2m+2}φ| / (η^{2m+2}φ)` with the
/// radial Laplacian `φ'' + (N-1)/r φ'` taken by central differences.
///
/// The step is `1e-4 / η^{1+m}`, which balances rounding against
/// truncation in double precision.
pub fn verify_eigen_identity<T: Real>(
    func: &SpatialTestFn<T>,
    r_samples: &[T],
) -> Result<T, TestFnError> {
    SpatialTestFn::new(func.n, func.m, func.eta)?;
    let lambda = func.eigenvalue();
    let base_step = lit::<T>(1e-4) / func.rate();
    let dims = lit::<T>(func.n as f64 - 1.0);
    let mut worst = T::zero();
    for &r in r_samples {
        if !(r > T::zero()) {
            return Err(TestFnError::Domain(format!(
                "samples must be > 0, got {}",
                as_f64(r)
            )));
        }
        let h = base_step.min(r * lit(0.5));
        let (d1, d2) = log_differences(|x| Ok(func.ln_value(x)), r, h, T::zero())?;
        let laplacian = d2 + dims / r * d1;
        worst = worst.max((laplacian - lambda).abs() / lambda);
    }
    Ok(worst)
}

fn check_matching<T: Real>(
    func: &SpatialTestFn<T>,
    profile: &ProfileParams<T>,
) -> Result<(), TestFnError> {
    SpatialTestFn::new(func.n, func.m, func.eta)?;
    profile.validate()?;
    if func.m != profile.m || func.eta != profile.eta {
        return Err(TestFnError::ParameterMismatch(format!(
            "test function (m={}, eta={}) and profile (m={}, eta={}) disagree",
            as_f64(func.m),
            as_f64(func.eta),
            as_f64(profile.m),
            as_f64(profile.eta)
        )));
    }
    Ok(())
}

/// `ln ψ^η(r, t) = ln ρ^η(t) + ln φ^η(r)`.
pub fn psi_eta<T: Real>(
    func: &SpatialTestFn<T>,
    profile: &ProfileParams<T>,
    r: T,
    t: T,
) -> Result<T, TestFnError> {
    check_matching(func, profile)?;
    if !(r >= T::zero()) {
        return Err(TestFnError::Domain(format!(
            "radius must be >= 0, got {}",
            as_f64(r)
        )));
    }
    Ok(rho(profile, t)?.ln_value + func.ln_value(r))
}

/// Maximum relative residual of the conjugate linear equation
/// `ψ_tt - t^{2m}Δψ - (μ/t ψ)_t + ν²/t² ψ = 0` over `(r, t)` points, with
/// every derivative taken by finite differences of `ln ψ`.
pub fn verify_conjugate_equation<T: Real>(
    func: &SpatialTestFn<T>,
    profile: &ProfileParams<T>,
    points: &[(T, T)],
) -> Result<T, TestFnError> {
    check_matching(func, profile)?;
    let dims = lit::<T>(func.n as f64 - 1.0);
    let mut worst = T::zero();
    for &(r, t) in points {
        if !(r > T::zero()) || !(t >= T::one()) {
            return Err(TestFnError::Domain(format!(
                "need r > 0 and t >= 1, got r={}, t={}",
                as_f64(r),
                as_f64(t)
            )));
        }
        let decay = rho(profile, t)?.log_derivative.abs();
        let ht = lit::<T>(1e-4) * t.min(T::one() / decay);
        let (dt1, dt2) = log_differences(|s| psi_eta(func, profile, r, s), t, ht, T::one())?;
        let hr = (lit::<T>(1e-4) / func.rate()).min(r * lit(0.5));
        let (dr1, dr2) = log_differences(|x| psi_eta(func, profile, x, t), r, hr, T::zero())?;
        let laplacian = dr2 + dims / r * dr1;

        let mu = profile.mu;
        let terms = [
            dt2,
            -t.powf(profile.m * lit(2.0)) * laplacian,
            -mu / t * dt1,
            mu / (t * t),
            profile.nu_sq() / (t * t),
        ];
        let sum = terms.iter().fold(T::zero(), |s, &x| s + x);
        let largest = terms.iter().fold(T::zero(), |s, &x| s.max(x.abs()));
        worst = worst.max(sum.abs() / largest);
    }
    Ok(worst)
}

/// Polynomial growth exponent `(2-r)(N-1)(m+1)/2` of `∫ (φ^η)^r` after the
/// factor `e^{rφ_m(ηt)}` is removed.
pub fn phi_growth_exponent<T: Real>(n: u32, m: T, r_exp: T) -> T {
    (lit::<T>(2.0) - r_exp) * lit(n as f64 - 1.0) * (m + T::one()) * lit(0.5)
}

/// Polynomial growth exponent `[(2-r)(N-1)(m+1) + r(μ-m)]/2` of `∫ (ψ^η)^r`.
pub fn psi_growth_exponent<T: Real>(n: u32, m: T, r_exp: T, mu: T) -> T {
    phi_growth_exponent(n, m, r_exp) + r_exp * (mu - m) * lit(0.5)
}

/// Default time grid: 12 geometric points whose phases `φ_m(t)` span
/// `[2, 72]` (`t ∈ [2, 12]` for `m = 1`).
pub fn default_t_grid<T: Real>(m: T) -> Vec<T> {
    let k = T::one() + m;
    let lo = (k * lit(2.0)).powf(T::one() / k);
    let hi = (k * lit(72.0)).powf(T::one() / k);
    let n = 12;
    (0..n)
        .map(|i| {
            let s: T = lit(i as f64 / (n - 1) as f64);
            (lo.ln() + (hi.ln() - lo.ln()) * s).exp()
        })
        .collect()
}

/// Outcome of [`growth_exponent_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthExponentFit<T> {
    pub t_grid: Vec<T>,
    /// `ln ∫(φ^η)^r dx - r φ_m(ηt)` per grid point.
    pub phi_log: Vec<T>,
    /// `ln ∫(ψ^η)^r dx` per grid point.
    pub psi_log: Vec<T>,
    pub phi_fit: LinearFit<T>,
    pub psi_fit: LinearFit<T>,
}

impl<T: Real> GrowthExponentFit<T> {
    pub fn phi_exponent(&self) -> T {
        self.phi_fit.slope
    }

    pub fn psi_exponent(&self) -> T {
        self.psi_fit.slope
    }

    /// Integrals divided by their bound shapes `(1+t)^k`; bounded sequences
    /// are what the growth estimates assert.
    pub fn bound_ratios(&self, phi_exponent: T, psi_exponent: T) -> (Vec<T>, Vec<T>) {
        let ratio = |logs: &[T], k: T| -> Vec<T> {
            logs.iter()
                .zip(&self.t_grid)
                .map(|(&l, &t)| (l - k * (T::one() + t).ln()).exp())
                .collect()
        };
        (
            ratio(&self.phi_log, phi_exponent),
            ratio(&self.psi_log, psi_exponent),
        )
    }
}

/// `ln ∫_{|x| ≤ radius} (φ^η)^r dx` by adaptive radial quadrature.
pub fn ln_ball_integral<T: Real>(
    func: &SpatialTestFn<T>,
    r_exp: T,
    radius: T,
) -> Result<T, TestFnError> {
    let top = func.ln_value(radius);
    let dims = func.n as i32 - 1;
    let integrand = |s: T| (r_exp * (func.ln_value(s) - top)).exp() * s.powi(dims);
    // the integrand concentrates within ~1/(r a) of the boundary
    let q = gauss_kronrod(integrand, T::zero(), radius, T::zero(), lit(1e-9), 4000);
    if !(q.value > T::zero()) || !q.value.is_finite() {
        return Err(TestFnError::FitFailure(format!(
            "radial integral is {} at radius {} (quadrature underflow)",
            as_f64(q.value),
            as_f64(radius)
        )));
    }
    Ok(q.value.ln() + func.sphere_measure().ln() + r_exp * top)
}

/// Integrates `(φ^η)^r` and `(ψ^η)^r` over the support ball at every `t`
/// in `t_grid`, removes the exponential factor and fits the remaining
/// polynomial growth exponent against `ln t`.
pub fn growth_exponent_fit<T: Real>(
    func: &SpatialTestFn<T>,
    profile: &ProfileParams<T>,
    support: &SupportRadius<T>,
    r_exp: T,
    t_grid: &[T],
) -> Result<GrowthExponentFit<T>, TestFnError> {
    check_matching(func, profile)?;
    if support.m != func.m {
        return Err(TestFnError::ParameterMismatch(
            "support radius uses a different m".into(),
        ));
    }
    if !(r_exp > T::one() && r_exp <= lit(3.0)) {
        return Err(TestFnError::Domain(format!(
            "exponent r must lie in (1, 3], got {}",
            as_f64(r_exp)
        )));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| !(t >= T::one())) {
        return Err(TestFnError::Domain(format!(
            "grid times must be >= 1, got {}",
            as_f64(t)
        )));
    }

    let mut phi_log = Vec::with_capacity(t_grid.len());
    let mut psi_log = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let ln_int = ln_ball_integral(func, r_exp, support.radius(t)?)?;
        let phase = phi_m(func.m, func.eta * t)?;
        phi_log.push(ln_int - r_exp * phase);
        psi_log.push(ln_int + r_exp * rho(profile, t)?.ln_value);
    }
    let ln_t: Vec<T> = t_grid.iter().map(|t| t.ln()).collect();
    let phi_fit = linear_fit(&ln_t, &phi_log)?;
    let psi_fit = linear_fit(&ln_t, &psi_log)?;
    Ok(GrowthExponentFit {
        t_grid: t_grid.to_vec(),
        phi_log,
        psi_log,
        phi_fit,
        psi_fit,
    })
}
