//! Ordinary least-squares line fits used for scaling-law exponents.

use thiserror::Error;

use crate::scalar::{lit, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {required} points for a line fit, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("degenerate abscissa: all x values coincide")]
    DegenerateAbscissa,
    #[error("non-finite data point at index {0}")]
    NonFinite(usize),
}

/// `y ≈ slope * x + intercept` with coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

impl<T: Real> LinearFit<T> {
    pub fn predict(&self, x: T) -> T {
        self.slope * x + self.intercept
    }
}

pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>, FitError> {
    assert_eq!(xs.len(), ys.len(), "abscissa and ordinate lengths differ");
    if xs.len() < 2 {
        return Err(FitError::TooFewPoints {
            required: 2,
            got: xs.len(),
        });
    }
    if let Some(i) = xs
        .iter()
        .zip(ys)
        .position(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(FitError::NonFinite(i));
    }
    let n: T = lit(xs.len() as f64);
    let mean_x = xs.iter().fold(T::zero(), |s, &x| s + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |s, &y| s + y) / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= lit::<T>(16.0) * n * (T::epsilon() * mean_x.abs()).powi(2) {
        return Err(FitError::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Fits `y ≈ C x^k` by least squares on `(ln x, ln y)`; returns the line in
/// log-log coordinates (slope = k).
pub fn log_log_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>, FitError> {
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-14);
        assert!((fit.intercept + 1.0).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_law() {
        let xs = [0.1, 1.0, 10.0, 100.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.75)).collect();
        let fit = log_log_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-12);
        assert!((fit.intercept.exp() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_short_inputs() {
        assert_eq!(
            linear_fit(&[0.5, 0.5, 0.5], &[1.0, 2.0, 3.0]),
            Err(FitError::DegenerateAbscissa)
        );
        assert!(matches!(
            linear_fit(&[1.0], &[1.0]),
            Err(FitError::TooFewPoints { .. })
        ));
        assert_eq!(
            linear_fit(&[1.0, f64::NAN], &[1.0, 2.0]),
            Err(FitError::NonFinite(1))
        );
    }
}
