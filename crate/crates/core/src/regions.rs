//! Hypothesis checks, blow-up region quantities and lifespan classification
//! for the coupled system with damping `μ_i/t`, masses `ν_i²/t²` and
//! Tricomi speed `t^m`.

use std::fmt;

use thiserror::Error;

use crate::scalar::{as_f64, lit, Real};

/// `|λ| < CRITICAL_TOLERANCE` counts as `λ = 0`.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("hypothesis violated: {}", .0.join("; "))]
    Hypothesis(Vec<String>),
    #[error("division-domain error: p*q = {0} must exceed 1")]
    DivisionDomain(f64),
    #[error("the theorem gives no lifespan bound outside the blow-up region (omega = {0})")]
    OutsideTheorem(f64),
    #[error("invalid lifespan argument: {0}")]
    InvalidArgument(String),
}

/// Full parameter tuple of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub n: u32,
    pub m: T,
    pub mu1: T,
    pub mu2: T,
    pub nu1_sq: T,
    pub nu2_sq: T,
    pub p: T,
    pub q: T,
    pub eps: T,
    pub radius: T,
}

impl<T: Real> SystemParams<T> {
    /// Checks the scalar hypotheses, reporting every violated one.
    pub fn validate(&self) -> Result<(), RegionError> {
        let mut failures = Vec::new();
        let mut need = |ok: bool, msg: String| {
            if !ok {
                failures.push(msg);
            }
        };
        let finite = [
            self.m,
            self.mu1,
            self.mu2,
            self.nu1_sq,
            self.nu2_sq,
            self.p,
            self.q,
            self.eps,
            self.radius,
        ]
        .iter()
        .all(|x| x.is_finite());
        need(finite, "all parameters must be finite".into());
        need(self.n >= 1, format!("N >= 1 (N = {})", self.n));
        need(
            self.m >= T::zero(),
            format!("m >= 0 (m = {})", as_f64(self.m)),
        );
        need(
            self.mu1 >= T::zero(),
            format!("mu1 >= 0 (mu1 = {})", as_f64(self.mu1)),
        );
        need(
            self.mu2 >= T::zero(),
            format!("mu2 >= 0 (mu2 = {})", as_f64(self.mu2)),
        );
        need(
            self.nu1_sq >= T::zero(),
            format!("nu1_sq >= 0 (nu1_sq = {})", as_f64(self.nu1_sq)),
        );
        need(
            self.nu2_sq >= T::zero(),
            format!("nu2_sq >= 0 (nu2_sq = {})", as_f64(self.nu2_sq)),
        );
        need(self.p > T::one(), format!("p > 1 (p = {})", as_f64(self.p)));
        need(self.q > T::one(), format!("q > 1 (q = {})", as_f64(self.q)));
        let (d1, d2) = self.deltas();
        need(
            d1 >= T::zero(),
            format!("delta1 >= 0 (delta1 = {})", as_f64(d1)),
        );
        need(
            d2 >= T::zero(),
            format!("delta2 >= 0 (delta2 = {})", as_f64(d2)),
        );
        need(
            self.eps > T::zero(),
            format!("eps > 0 (eps = {})", as_f64(self.eps)),
        );
        need(
            self.radius > T::zero(),
            format!("R > 0 (R = {})", as_f64(self.radius)),
        );
        if failures.is_empty() {
            Ok(())
        } else {
            Err(RegionError::Hypothesis(failures))
        }
    }

    pub fn deltas(&self) -> (T, T) {
        (delta(self.mu1, self.nu1_sq), delta(self.mu2, self.nu2_sq))
    }

    /// The same system with the two components exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            mu1: self.mu2,
            mu2: self.mu1,
            nu1_sq: self.nu2_sq,
            nu2_sq: self.nu1_sq,
            p: self.q,
            q: self.p,
            ..*self
        }
    }
}

/// `δ = (μ-1)² - 4ν²`. Negative values are returned as is.
pub fn delta<T: Real>(mu: T, nu_sq: T) -> T {
    let s = mu - T::one();
    s * s - nu_sq * lit(4.0)
}

/// Shifted dimension `Ñ_m = N(m+1) - 2m`.
pub fn shifted_dimension<T: Real>(n: u32, m: T) -> T {
    // written as N + (N-2)m so that N = 2 is exact for every m
    lit::<T>(n as f64) + lit::<T>(n as f64 - 2.0) * m
}

/// `Λ(d, p, q) = (p+1)/(pq-1) - (d-1)/2`.
pub fn lambda_fn<T: Real>(d: T, p: T, q: T) -> Result<T, RegionError> {
    let pq1 = p * q - T::one();
    if !(pq1 > T::zero()) {
        return Err(RegionError::DivisionDomain(as_f64(p * q)));
    }
    Ok((p + T::one()) / pq1 - (d - T::one()) * lit(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `Ω > 0`: polynomial lifespan bound.
    Subcritical,
    /// `Ω = 0`: exponential bound with exponent `pq - 1`.
    Critical,
    /// `Λ_1 = Λ_2 = 0`.
    DoublyCritical,
    /// `Ω < 0`: not covered by the blow-up theorem.
    OutsideTheorem,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Subcritical => "Subcritical",
            Branch::Critical => "Critical",
            Branch::DoublyCritical => "DoublyCritical",
            Branch::OutsideTheorem => "OutsideTheorem",
        }
    }

    /// Branch for a pair `(λ_1, λ_2)`.
    pub fn from_lambdas<T: Real>(lambda1: T, lambda2: T) -> Self {
        let tol: T = lit(CRITICAL_TOLERANCE);
        let omega = lambda1.max(lambda2);
        if lambda1.abs() < tol && lambda2.abs() < tol {
            Branch::DoublyCritical
        } else if omega.abs() < tol {
            Branch::Critical
        } else if omega > T::zero() {
            Branch::Subcritical
        } else {
            Branch::OutsideTheorem
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Form of the lifespan upper bound in `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentDescriptor<T> {
    /// `C ε^{-power}`
    Power { power: T },
    /// `exp(C ε^{-power})`
    ExpPower { power: T },
    /// No bound.
    None,
}

impl<T: Real> fmt::Display for ExponentDescriptor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentDescriptor::Power { power } => write!(f, "C*eps^-{power}"),
            ExponentDescriptor::ExpPower { power } => write!(f, "exp(C*eps^-{power})"),
            ExponentDescriptor::None => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifespanClassification<T> {
    pub omega: T,
    pub lambda1: T,
    pub lambda2: T,
    pub branch: Branch,
    pub exponent: ExponentDescriptor<T>,
}

/// Classifies `params` into a lifespan branch from `Λ(Ñ_m+μ_1, p, q)` and
/// `Λ(Ñ_m+μ_2, q, p)`.
pub fn omega<T: Real>(params: &SystemParams<T>) -> Result<LifespanClassification<T>, RegionError> {
    params.validate()?;
    let nm = shifted_dimension(params.n, params.m);
    let lambda1 = lambda_fn(nm + params.mu1, params.p, params.q)?;
    let lambda2 = lambda_fn(nm + params.mu2, params.q, params.p)?;
    Ok(classify_lambdas(lambda1, lambda2, params.p, params.q))
}

/// Classification from precomputed `λ_1`, `λ_2`.
pub fn classify_lambdas<T: Real>(lambda1: T, lambda2: T, p: T, q: T) -> LifespanClassification<T> {
    let omega = lambda1.max(lambda2);
    let branch = Branch::from_lambdas(lambda1, lambda2);
    let pq1 = p * q - T::one();
    let exponent = match branch {
        Branch::Subcritical => ExponentDescriptor::Power { power: omega },
        Branch::Critical => ExponentDescriptor::ExpPower { power: pq1 },
        Branch::DoublyCritical => ExponentDescriptor::ExpPower {
            power: (pq1 / (p + T::one())).min(pq1 / (q + T::one())),
        },
        Branch::OutsideTheorem => ExponentDescriptor::None,
    };
    LifespanClassification {
        omega,
        lambda1,
        lambda2,
        branch,
        exponent,
    }
}

/// Evaluates the lifespan upper bound for data size `eps` with the
/// (theorem-unspecified) constant `c`.
pub fn lifespan_upper_bound<T: Real>(
    cls: &LifespanClassification<T>,
    eps: T,
    c: T,
) -> Result<T, RegionError> {
    if !(eps > T::zero()) || !(c > T::zero()) {
        return Err(RegionError::InvalidArgument(format!(
            "eps and C must be positive (eps = {}, C = {})",
            as_f64(eps),
            as_f64(c)
        )));
    }
    match cls.exponent {
        ExponentDescriptor::Power { power } => Ok(c * eps.powf(-power)),
        ExponentDescriptor::ExpPower { power } => Ok((c * eps.powf(-power)).exp()),
        ExponentDescriptor::None => Err(RegionError::OutsideTheorem(as_f64(cls.omega))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, m: f64, mu1: f64, mu2: f64, p: f64, q: f64) -> SystemParams<f64> {
        SystemParams {
            n,
            m,
            mu1,
            mu2,
            nu1_sq: 0.0,
            nu2_sq: 0.0,
            p,
            q,
            eps: 0.1,
            radius: 1.0,
        }
    }

    #[test]
    fn delta_and_shift() {
        assert_eq!(delta(1.0, 0.0), 0.0);
        assert_eq!(delta(3.0, 1.0), 0.0);
        assert_eq!(delta(4.0, 0.0), 9.0);
        assert_eq!(shifted_dimension(1, 1.0), 0.0);
        for m in [0.0, 0.3, 1.0, 7.5] {
            assert_eq!(shifted_dimension(2, m), 2.0);
        }
        for n in 1..6 {
            assert_eq!(shifted_dimension(n, 0.0), n as f64);
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_fn(1.0, 2.0, 1.5).unwrap(), 1.5);
        assert_eq!(lambda_fn(4.0, 2.0, 1.5).unwrap(), 0.0);
        assert_eq!(lambda_fn(2.0, 1.5, 2.0).unwrap(), 0.75);
        assert!(matches!(
            lambda_fn(1.0, 0.5, 2.0),
            Err(RegionError::DivisionDomain(_))
        ));
    }

    #[test]
    fn figure_parameter_regions() {
        let a = omega(&params(1, 1.0, 4.0, 2.0, 2.0, 1.5)).unwrap();
        assert_eq!(a.omega, 0.75);
        assert_eq!(a.branch, Branch::Subcritical);
        let c = omega(&params(1, 1.0, 0.0, 2.0, 2.0, 1.5)).unwrap();
        assert_eq!(c.omega, 2.0);
        let e = omega(&params(2, 1.0, 3.0, 5.0, 2.0, 1.25)).unwrap();
        assert_eq!(e.omega, 0.0);
        assert_eq!(e.lambda2, -1.5);
        assert_eq!(e.branch, Branch::Critical);
    }

    #[test]
    fn outside_and_doubly_critical() {
        // Λ(18, 3, 3) = 4/8 - 17/2 = -8
        let far = omega(&params(10, 1.0, 0.0, 0.0, 3.0, 3.0)).unwrap();
        assert_eq!(far.omega, -8.0);
        assert!(far.omega < 0.0);
        assert_eq!(far.branch, Branch::OutsideTheorem);
        assert!(matches!(
            lifespan_upper_bound(&far, 0.1, 1.0),
            Err(RegionError::OutsideTheorem(_))
        ));

        // p = q = 3, N = 1, m = 0: Λ(1 + μ, 3, 3) = 0.5 - μ/2 vanishes at μ = 1
        let dc = omega(&params(1, 0.0, 1.0, 1.0, 3.0, 3.0)).unwrap();
        assert_eq!(dc.branch, Branch::DoublyCritical);
        assert_eq!(dc.exponent, ExponentDescriptor::ExpPower { power: 2.0 });
    }

    #[test]
    fn exponents_near_one_are_inside_region() {
        // (p+1)/(pq-1) dominates as pq -> 1: Λ(18, 1.01, 1.01) = 100 - 8.5
        let near = omega(&params(10, 1.0, 0.0, 0.0, 1.01, 1.01)).unwrap();
        assert!((near.omega - 91.5).abs() < 1e-9);
        assert_eq!(near.branch, Branch::Subcritical);
    }

    #[test]
    fn lifespan_bounds() {
        let a = omega(&params(1, 1.0, 4.0, 2.0, 2.0, 1.5)).unwrap();
        let v = lifespan_upper_bound(&a, 0.1, 1.0).unwrap();
        assert!((v - 10f64.powf(0.75)).abs() < 1e-12);
        assert_eq!(lifespan_upper_bound(&a, 1.0, 1.0).unwrap(), 1.0);

        let e = omega(&params(2, 1.0, 3.0, 5.0, 2.0, 1.25)).unwrap();
        let v = lifespan_upper_bound(&e, 0.1, 1.0).unwrap();
        assert!((v.ln() - 10f64.powf(1.5)).abs() < 1e-10);
        assert!(lifespan_upper_bound(&e, 0.0, 1.0).is_err());
    }

    #[test]
    fn hypothesis_violations_are_all_listed() {
        let mut p = params(1, 1.0, 0.0, 0.0, 1.0, 0.5);
        p.nu1_sq = 1.0;
        match omega(&p) {
            Err(RegionError::Hypothesis(list)) => {
                assert!(list.iter().any(|s| s.starts_with("p > 1")));
                assert!(list.iter().any(|s| s.starts_with("q > 1")));
                assert!(list.iter().any(|s| s.starts_with("delta1 >= 0")));
                assert_eq!(list.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_precision() {
        let p = SystemParams::<f32> {
            n: 1,
            m: 1.0,
            mu1: 4.0,
            mu2: 2.0,
            nu1_sq: 0.0,
            nu2_sq: 0.0,
            p: 2.0,
            q: 1.5,
            eps: 0.1,
            radius: 1.0,
        };
        assert_eq!(omega(&p).unwrap().omega, 0.75);
    }
}
