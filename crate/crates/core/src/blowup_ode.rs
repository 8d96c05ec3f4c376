//! Borderline ODE model of the coupled system,
//!
//! ```text
//! Y1' = Y2^p t^{a1},   Y2' = Y1^q t^{a2},   Y1(1) = Y2(1) = ε,
//! ```
//!
//! integrated with an adaptive Dormand-Prince 5(4) pair until one component
//! crosses the largest blow-up threshold, the step size underflows, or the
//! horizon is reached.
//!
//! Once either component exceeds `log_switch` the integration continues in
//! `z = ln Y`, which keeps `Y^p` representable up to the final threshold.
//! Threshold crossings are located on the continuous extension of the step.
//! The blow-up time is extrapolated by fitting `Y ≈ A (T_b - t)^{-α}` to the
//! last accepted steps of the leading component.

use std::collections::VecDeque;

use thiserror::Error;

use crate::fit::linear_fit;
use crate::regions::{RegionError, SystemParams};
use crate::rk::{dense_eval, dopri5_step, Dopri5Step, State};
use crate::scalar::{as_f64, lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error(transparent)]
    Params(#[from] RegionError),
    #[error("invalid integration settings: {0}")]
    Settings(String),
    #[error("integrator fault at t = {t}: {reason}")]
    Fault { t: f64, reason: String },
    #[error("{0}")]
    NotApplicable(String),
}

/// Exponents of `t` in the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeExponents<T> {
    pub a1: T,
    pub a2: T,
}

/// `a1 = -(p-1)k/2 + μ1/2 - μ2 p/2`, `a2 = -(q-1)k/2 + μ2/2 - μ1 q/2`
/// with `k = (N-1)(m+1) - m`.
pub fn exponents<T: Real>(params: &SystemParams<T>) -> OdeExponents<T> {
    let half: T = lit(0.5);
    let k = lit::<T>(params.n as f64 - 1.0) * (params.m + T::one()) - params.m;
    let a1 = -(params.p - T::one()) * k * half + params.mu1 * half - params.mu2 * params.p * half;
    let a2 = -(params.q - T::one()) * k * half + params.mu2 * half - params.mu1 * params.q * half;
    OdeExponents { a1, a2 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSettings<T> {
    pub horizon: T,
    /// Ascending blow-up levels; crossing the last one terminates the run.
    pub thresholds: Vec<T>,
    pub rtol: T,
    pub atol: T,
    pub h_min: T,
    pub h_init: T,
    /// Level above which the state is integrated in logarithmic form.
    pub log_switch: T,
    pub max_steps: usize,
    /// Number of trailing accepted steps used for the `T_b` fit.
    pub fit_window: usize,
    /// Record interior points of every step from the continuous extension.
    pub dense: bool,
}

impl<T: Real> Default for IntegrationSettings<T> {
    fn default() -> Self {
        Self {
            horizon: lit(1e5),
            thresholds: vec![lit(1e6), lit(1e8), lit(1e10)],
            rtol: lit(1e-8),
            atol: lit(1e-12),
            h_min: lit(1e-12),
            h_init: lit(1e-4),
            log_switch: lit(1e3),
            max_steps: 2_000_000,
            fit_window: 20,
            dense: false,
        }
    }
}

impl<T: Real> IntegrationSettings<T> {
    pub fn with_horizon(mut self, horizon: T) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_tolerances(mut self, rtol: T, atol: T) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    fn validate(&self, eps: T) -> Result<(), OdeError> {
        let bad = |msg: String| Err(OdeError::Settings(msg));
        if !(self.horizon > T::one()) || !self.horizon.is_finite() {
            return bad(format!(
                "horizon must exceed 1, got {}",
                as_f64(self.horizon)
            ));
        }
        if self.thresholds.is_empty() {
            return bad("at least one threshold is required".into());
        }
        if self.thresholds.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("thresholds must be strictly ascending".into());
        }
        if !(self.thresholds[0] > eps) || !self.thresholds.iter().all(|x| x.is_finite()) {
            return bad("thresholds must be finite and exceed the initial value".into());
        }
        if !(self.rtol > T::zero()) || !(self.atol > T::zero()) {
            return bad("tolerances must be positive".into());
        }
        if !(self.h_min > T::zero()) || !(self.h_init > self.h_min) {
            return bad("need 0 < h_min < h_init".into());
        }
        if self.fit_window < 4 {
            return bad("fit window needs at least 4 steps".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    pub y1: T,
    pub y2: T,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub dense: bool,
}

impl<T: Real> Trajectory<T> {
    /// First time component `which` (0 or 1) reaches `level`, from
    /// log-linear interpolation between samples.
    pub fn first_crossing(&self, which: usize, level: T) -> Option<T> {
        let get = |s: &Sample<T>| if which == 0 { s.y1 } else { s.y2 };
        let idx = self.samples.iter().position(|s| get(s) >= level)?;
        if idx == 0 {
            return Some(self.samples[0].t);
        }
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let (la, lb) = (get(a).ln(), get(b).ln());
        let frac = if lb > la {
            (level.ln() - la) / (lb - la)
        } else {
            T::one()
        };
        Some(a.t + (b.t - a.t) * frac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    ThresholdCrossed,
    StepUnderflow,
    HorizonReached,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ThresholdCrossed => "ThresholdCrossed",
            Termination::StepUnderflow => "StepUnderflow",
            Termination::HorizonReached => "HorizonReached",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First times at which each component reached `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCrossing<T> {
    pub level: T,
    pub y1: Option<T>,
    pub y2: Option<T>,
}

impl<T: Real> ThresholdCrossing<T> {
    /// Time at which `max(Y1, Y2)` reached the level.
    pub fn first(&self) -> Option<T> {
        match (self.y1, self.y2) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupResult<T> {
    pub blew_up: bool,
    pub t_b_estimate: Option<T>,
    /// Blow-up rate `α` from the `A (T_b - t)^{-α}` fit.
    pub blowup_rate: Option<T>,
    pub crossings: Vec<ThresholdCrossing<T>>,
    pub termination: Termination,
    pub trajectory: Trajectory<T>,
    pub stats: StepStats,
    pub horizon: T,
}

impl<T: Real> BlowupResult<T> {
    /// `(t at Y = level)` for each threshold, with `Y = max(Y1, Y2)`.
    pub fn threshold_spread(&self) -> Vec<Option<T>> {
        self.crossings.iter().map(|c| c.first()).collect()
    }

    /// Final time of the run: `T_b` for blow-up, the horizon for
    /// horizon-terminated runs, the last reached time otherwise.
    pub fn reported_time(&self) -> T {
        match self.termination {
            Termination::ThresholdCrossed => self.t_b_estimate.unwrap_or_else(|| self.last_time()),
            Termination::HorizonReached => self.horizon,
            Termination::StepUnderflow => self.last_time(),
        }
    }

    fn last_time(&self) -> T {
        self.trajectory
            .samples
            .last()
            .map(|s| s.t)
            .unwrap_or(T::one())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Phase {
    Linear,
    Log,
}

struct Rhs<T> {
    p: T,
    q: T,
    exps: OdeExponents<T>,
}

impl<T: Real> Rhs<T> {
    fn linear(&self, t: T, y: &State<T>) -> State<T> {
        [
            y[1].powf(self.p) * t.powf(self.exps.a1),
            y[0].powf(self.q) * t.powf(self.exps.a2),
        ]
    }

    fn log(&self, t: T, z: &State<T>) -> State<T> {
        let lt = t.ln();
        [
            (self.p * z[1] - z[0] + self.exps.a1 * lt).exp(),
            (self.q * z[0] - z[1] + self.exps.a2 * lt).exp(),
        ]
    }

    fn eval(&self, phase: Phase, t: T, s: &State<T>) -> State<T> {
        match phase {
            Phase::Linear => self.linear(t, s),
            Phase::Log => self.log(t, s),
        }
    }
}

fn to_y<T: Real>(phase: Phase, s: &State<T>) -> State<T> {
    match phase {
        Phase::Linear => *s,
        Phase::Log => [s[0].exp(), s[1].exp()],
    }
}

/// Locates `θ ∈ (0, 1]` where component `i` of the continuous extension
/// reaches `target`, assuming it is below at `θ = 0` and at or above at 1.
fn refine_crossing<T: Real>(step: &Dopri5Step<T>, i: usize, target: T) -> T {
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if dense_eval(&step.cont, mid)[i] >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Fits `ln Y = c - α ln(T - t)` over `(t, ln Y)` points and returns
/// `(T, α)`; `T` is found by minimising the residual of the inner linear
/// least-squares problem.
pub fn fit_blowup_time<T: Real>(times: &[T], log_values: &[T]) -> Option<(T, T)> {
    let n = times.len();
    if n < 4 {
        return None;
    }
    let t_last = times[n - 1];
    let span = t_last - times[0];
    if !(span > T::zero()) {
        return None;
    }
    let sse = |gap: T| -> Option<(T, T)> {
        let xs: Vec<T> = times.iter().map(|&t| -(t_last + gap - t).ln()).collect();
        let fit = linear_fit(&xs, log_values).ok()?;
        let s = xs.iter().zip(log_values).fold(T::zero(), |acc, (&x, &y)| {
            let r = y - fit.predict(x);
            acc + r * r
        });
        Some((s, fit.slope))
    };
    // search ln(T - t_last) on a grid, then golden-section around the best
    let lo = (span * lit(1e-12))
        .max(t_last * T::epsilon() * lit(8.0))
        .ln();
    let hi = (span * lit(10.0)).ln();
    let grid = 240;
    let at = |k: usize| lo + (hi - lo) * lit(k as f64 / grid as f64);
    let mut best = (0usize, T::infinity());
    for k in 0..=grid {
        if let Some((s, _)) = sse(at(k).exp()) {
            if s < best.1 {
                best = (k, s);
            }
        }
    }
    if !best.1.is_finite() {
        return None;
    }
    let mut a = at(best.0.saturating_sub(1));
    let mut b = at((best.0 + 1).min(grid));
    let ratio: T = lit(0.618_033_988_749_894_9);
    let f = |u: T| sse(u.exp()).map(|v| v.0).unwrap_or(T::infinity());
    let mut c = b - (b - a) * ratio;
    let mut d = a + (b - a) * ratio;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..120 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * ratio;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * ratio;
            fd = f(d);
        }
        if (b - a).abs() <= lit::<T>(1e-12) * (T::one() + a.abs()) {
            break;
        }
    }
    let gap = ((a + b) * lit(0.5)).exp();
    let (_, alpha) = sse(gap)?;
    Some((t_last + gap, alpha))
}

const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

/// Integrates the borderline system from `t = 1` with `Y1 = Y2 = ε`.
pub fn integrate<T: Real>(
    params: &SystemParams<T>,
    settings: &IntegrationSettings<T>,
) -> Result<BlowupResult<T>, OdeError> {
    params.validate()?;
    settings.validate(params.eps)?;
    let rhs = Rhs {
        p: params.p,
        q: params.q,
        exps: exponents(params),
    };
    let top = *settings.thresholds.last().expect("validated non-empty");
    let mut crossings: Vec<ThresholdCrossing<T>> = settings
        .thresholds
        .iter()
        .map(|&level| ThresholdCrossing {
            level,
            y1: None,
            y2: None,
        })
        .collect();

    let mut phase = Phase::Linear;
    let mut t = T::one();
    let mut state: State<T> = [params.eps, params.eps];
    let mut k1 = rhs.eval(phase, t, &state);
    let mut stats = StepStats {
        evaluations: 1,
        ..Default::default()
    };
    let mut samples = vec![Sample {
        t,
        y1: state[0],
        y2: state[1],
    }];
    // accepted-step endpoints for the blow-up time fit
    let mut ends: VecDeque<Sample<T>> = VecDeque::with_capacity(settings.fit_window + 1);
    ends.push_back(samples[0]);
    let mut h = settings.h_init.min(settings.horizon - t);
    let mut fac_old: T = lit(1e-4);
    let mut rejected_last = false;
    let expo1: T = lit(0.2 - BETA * 0.75);

    let termination = loop {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(OdeError::Fault {
                t: as_f64(t),
                reason: format!("step budget of {} exhausted", settings.max_steps),
            });
        }
        if h < settings.h_min || t + h == t {
            break Termination::StepUnderflow;
        }
        let f = |s: T, y: &State<T>| rhs.eval(phase, s, y);
        let step = dopri5_step(&f, t, &state, &k1, h);
        stats.evaluations += 6;

        let mut err = T::zero();
        #[allow(clippy::needless_range_loop)]
        for i in 0..2 {
            let sc = match phase {
                Phase::Linear => {
                    settings.atol + settings.rtol * state[i].abs().max(step.y_new[i].abs())
                }
                // absolute error in ln Y is relative error in Y
                Phase::Log => settings.rtol,
            };
            let r = step.err[i] / sc;
            err = err + r * r;
        }
        err = (err * lit(0.5)).sqrt();
        if !err.is_finite() {
            // overflow inside the trial step: shrink hard and retry
            stats.rejected += 1;
            h = h * lit(FAC_MIN);
            rejected_last = true;
            continue;
        }

        let fac11 = err.powf(expo1);
        if err <= T::one() {
            let t_new = t + h;
            if step.y_new.iter().any(|v| !v.is_finite())
                || (phase == Phase::Linear && step.y_new.iter().any(|&v| v <= T::zero()))
            {
                return Err(OdeError::Fault {
                    t: as_f64(t_new),
                    reason: format!(
                        "non-positive or non-finite state {:?}",
                        to_y(phase, &step.y_new)
                    ),
                });
            }
            if step.y_new[0] < state[0] || step.y_new[1] < state[1] {
                return Err(OdeError::Fault {
                    t: as_f64(t_new),
                    reason: "state decreased although the right-hand side is nonnegative".into(),
                });
            }
            stats.accepted += 1;

            // threshold crossings inside this step
            let mut stop_theta: Option<T> = None;
            for c in crossings.iter_mut() {
                let target = match phase {
                    Phase::Linear => c.level,
                    Phase::Log => c.level.ln(),
                };
                for i in 0..2 {
                    let slot = if i == 0 { &mut c.y1 } else { &mut c.y2 };
                    if slot.is_none() && step.y_new[i] >= target {
                        let theta = refine_crossing(&step, i, target);
                        *slot = Some(t + h * theta);
                        if c.level == top {
                            stop_theta = Some(stop_theta.map_or(theta, |s: T| s.min(theta)));
                        }
                    }
                }
            }

            if settings.dense {
                for j in 1..4 {
                    let theta: T = lit(j as f64 / 4.0);
                    if stop_theta.is_none_or(|s| theta < s) {
                        let y = to_y(phase, &dense_eval(&step.cont, theta));
                        samples.push(Sample {
                            t: t + h * theta,
                            y1: y[0],
                            y2: y[1],
                        });
                    }
                }
            }

            if let Some(theta) = stop_theta {
                let y = to_y(phase, &dense_eval(&step.cont, theta));
                let t_stop = t + h * theta;
                if t_stop > t {
                    let stop = Sample {
                        t: t_stop,
                        y1: y[0],
                        y2: y[1],
                    };
                    samples.push(stop);
                    ends.push_back(stop);
                }
                break Termination::ThresholdCrossed;
            }

            t = t_new;
            state = step.y_new;
            k1 = step.k_last;
            let y = to_y(phase, &state);
            let end = Sample {
                t,
                y1: y[0],
                y2: y[1],
            };
            samples.push(end);
            ends.push_back(end);
            if ends.len() > settings.fit_window {
                ends.pop_front();
            }
            if t >= settings.horizon {
                break Termination::HorizonReached;
            }

            if phase == Phase::Linear && state[0].max(state[1]) > settings.log_switch {
                phase = Phase::Log;
                state = [state[0].ln(), state[1].ln()];
                k1 = rhs.eval(phase, t, &state);
                stats.evaluations += 1;
            }

            let fac = (fac11 / fac_old.powf(lit(BETA)) / lit::<T>(SAFE))
                .min(lit(1.0 / FAC_MIN))
                .max(lit(1.0 / FAC_MAX));
            let mut h_new = h / fac;
            fac_old = err.max(lit(1e-4));
            if rejected_last {
                h_new = h_new.min(h);
            }
            rejected_last = false;
            h = h_new.min(settings.horizon - t);
        } else {
            stats.rejected += 1;
            rejected_last = true;
            h = h / (fac11 / lit::<T>(SAFE)).min(lit(1.0 / FAC_MIN));
        }
    };

    let mut result = BlowupResult {
        blew_up: termination == Termination::ThresholdCrossed,
        t_b_estimate: None,
        blowup_rate: None,
        crossings,
        termination,
        trajectory: Trajectory {
            samples,
            dense: settings.dense,
        },
        stats,
        horizon: settings.horizon,
    };
    if result.blew_up {
        while ends.len() > settings.fit_window {
            ends.pop_front();
        }
        let last = ends.back().expect("non-empty");
        let lead = if last.y1 >= last.y2 { 0 } else { 1 };
        let pts: Vec<&Sample<T>> = ends.iter().collect();
        let times: Vec<T> = pts.iter().map(|s| s.t).collect();
        let logs: Vec<T> = pts
            .iter()
            .map(|s| if lead == 0 { s.y1.ln() } else { s.y2.ln() })
            .collect();
        let top_time = result.crossings.last().and_then(|c| c.first());
        match fit_blowup_time(&times, &logs) {
            Some((tb, alpha)) => {
                result.t_b_estimate = Some(tb);
                result.blowup_rate = Some(alpha);
            }
            None => result.t_b_estimate = top_time,
        }
    }
    Ok(result)
}

/// `|t(Y1 = level) - t(Y2 = level)| / T_b`; infinite when one component
/// never reached the level.
pub fn simultaneity_gap<T: Real>(result: &BlowupResult<T>, level: T) -> Result<T, OdeError> {
    let tb = match (result.blew_up, result.t_b_estimate) {
        (true, Some(tb)) => tb,
        _ => {
            return Err(OdeError::NotApplicable(
                "simultaneity gap needs a blow-up run".into(),
            ))
        }
    };
    let (t1, t2) = match result.crossings.iter().find(|c| c.level == level) {
        Some(c) => (c.y1, c.y2),
        None => (
            result.trajectory.first_crossing(0, level),
            result.trajectory.first_crossing(1, level),
        ),
    };
    match (t1, t2) {
        (Some(a), Some(b)) => Ok((a - b).abs() / tb),
        _ => Ok(T::infinity()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_params(mu1: f64, mu2: f64, eps: f64) -> SystemParams<f64> {
        SystemParams {
            n: 1,
            m: 1.0,
            mu1,
            mu2,
            nu1_sq: 0.0,
            nu2_sq: 0.0,
            p: 2.0,
            q: 1.5,
            eps,
            radius: 1.0,
        }
    }

    #[test]
    fn exponent_examples() {
        let e = exponents(&fig_params(4.0, 2.0, 0.1));
        assert_eq!((e.a1, e.a2), (0.5, -1.75));
        let flat = SystemParams {
            m: 0.0,
            mu1: 0.0,
            mu2: 0.0,
            p: 3.7,
            ..fig_params(0.0, 0.0, 0.1)
        };
        let e = exponents(&flat);
        assert_eq!((e.a1, e.a2), (0.0, 0.0));
        let sym = SystemParams {
            n: 3,
            m: 0.7,
            mu1: 1.3,
            mu2: 1.3,
            p: 2.2,
            q: 2.2,
            ..fig_params(0.0, 0.0, 0.1)
        };
        let e = exponents(&sym);
        assert_eq!(e.a1, e.a2);
    }

    #[test]
    fn blowup_time_fit_recovers_synthetic_singularity() {
        let (tb, alpha, amp): (f64, f64, f64) = (12.5, 1.5, 3.0);
        let times: Vec<f64> = (0..20).map(|k| tb - 0.1 * 0.6f64.powi(k)).collect();
        let logs: Vec<f64> = times
            .iter()
            .map(|t| amp.ln() - alpha * (tb - t).ln())
            .collect();
        let (fit_tb, fit_alpha) = fit_blowup_time(&times, &logs).unwrap();
        assert!((fit_tb - tb).abs() < 1e-9, "{fit_tb}");
        assert!((fit_alpha - alpha).abs() < 1e-6);
    }

    #[test]
    fn settings_validation() {
        let p = fig_params(4.0, 2.0, 0.1);
        let s = IntegrationSettings::default().with_horizon(0.5);
        assert!(matches!(integrate(&p, &s), Err(OdeError::Settings(_))));
        let mut s = IntegrationSettings {
            thresholds: vec![1e8, 1e6],
            ..Default::default()
        };
        assert!(matches!(integrate(&p, &s), Err(OdeError::Settings(_))));
        s.thresholds = vec![0.05];
        assert!(matches!(integrate(&p, &s), Err(OdeError::Settings(_))));
        let bad = SystemParams { p: 0.9, ..p };
        assert!(matches!(
            integrate(&bad, &IntegrationSettings::default()),
            Err(OdeError::Params(_))
        ));
    }

    #[test]
    fn horizon_termination_and_gap_error() {
        let p = fig_params(4.0, 2.0, 0.1);
        let r = integrate(&p, &IntegrationSettings::default().with_horizon(5.0)).unwrap();
        assert_eq!(r.termination, Termination::HorizonReached);
        assert!(!r.blew_up);
        assert_eq!(r.trajectory.samples.last().unwrap().t, 5.0);
        assert_eq!(r.reported_time(), 5.0);
        assert!(simultaneity_gap(&r, 1e6).is_err());
    }

    #[test]
    fn fig_c_blows_up_near_eight() {
        let r = integrate(&fig_params(0.0, 2.0, 0.1), &IntegrationSettings::default()).unwrap();
        assert!(r.blew_up);
        let tb = r.t_b_estimate.unwrap();
        assert!((tb - 8.0).abs() < 0.15 * 8.0, "{tb}");
        let top = r.crossings.last().unwrap().first().unwrap();
        assert!(tb >= top);
        assert!(simultaneity_gap(&r, 1e6).unwrap().is_finite());
    }

    #[test]
    fn dense_recording_keeps_fit() {
        let s = IntegrationSettings {
            dense: true,
            ..Default::default()
        };
        let dense = integrate(&fig_params(0.0, 2.0, 0.1), &s).unwrap();
        let sparse =
            integrate(&fig_params(0.0, 2.0, 0.1), &IntegrationSettings::default()).unwrap();
        assert!(dense.trajectory.samples.len() > 3 * sparse.trajectory.samples.len());
        let (a, b) = (dense.t_b_estimate.unwrap(), sparse.t_b_estimate.unwrap());
        assert!((a - b).abs() < 1e-9 * b);
    }

    #[test]
    fn single_precision_run() {
        let p = SystemParams::<f32> {
            n: 1,
            m: 1.0,
            mu1: 0.0,
            mu2: 2.0,
            nu1_sq: 0.0,
            nu2_sq: 0.0,
            p: 2.0,
            q: 1.5,
            eps: 0.1,
            radius: 1.0,
        };
        let mut s = IntegrationSettings::<f32>::default().with_tolerances(1e-5, 1e-7);
        s.h_min = 1e-7;
        // f32 cannot resolve t near T_b finely enough for 1e10
        s.thresholds = vec![1e4, 1e5, 1e6];
        let r = integrate(&p, &s).unwrap();
        assert!(r.blew_up, "{:?}", r.termination);
        assert!((r.reported_time() - 7.56).abs() < 0.1);
    }
}
