//! Numerical core for blow-up analysis of two coupled wave equations with
//! scale-invariant damping, mass terms and speed `t^m`, nonlinear in `∂_t u`.
//!
//! * [`specfun`]: `K_ν`, `I_0`, the Tricomi phase and the time profile `ρ^η`.
//! * [`testfn`]: spatial and space-time test functions and their identity
//!   and growth-rate checks.
//! * [`regions`]: hypothesis validation, `Λ`, `Ω` and lifespan branches.
//! * [`blowup_ode`]: adaptive integration of the borderline ODE system with
//!   blow-up detection.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the tolerances
//! quoted in the documentation refer to.

// `!(x > y)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup_ode;
pub mod fit;
pub mod quad;
pub mod regions;
pub mod rk;
pub mod scalar;
pub mod specfun;
pub mod testfn;

pub use scalar::{lit, Real};

pub type SystemParamsF64 = regions::SystemParams<f64>;
pub type SystemParamsF32 = regions::SystemParams<f32>;
pub type LifespanClassificationF64 = regions::LifespanClassification<f64>;
pub type ProfileParamsF64 = specfun::ProfileParams<f64>;
pub type ProfileParamsF32 = specfun::ProfileParams<f32>;
pub type ProfileEvalF64 = specfun::ProfileEval<f64>;
pub type SpatialTestFnF64 = testfn::SpatialTestFn<f64>;
pub type IntegrationSettingsF64 = blowup_ode::IntegrationSettings<f64>;
pub type BlowupResultF64 = blowup_ode::BlowupResult<f64>;
pub type TrajectoryF64 = blowup_ode::Trajectory<f64>;
pub type LinearFitF64 = fit::LinearFit<f64>;
