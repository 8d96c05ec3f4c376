//! Dormand-Prince 5(4) step for a two-component state, with the embedded
//! error estimate and the 4th-order continuous extension.

use crate::scalar::{lit, Real};

pub type State<T> = [T; 2];

/// One trial step from `(t, y)` with `k1 = f(t, y)`.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5Step<T> {
    pub y_new: State<T>,
    /// `f(t + h, y_new)`, reused as `k1` of the next step.
    pub k_last: State<T>,
    pub err: State<T>,
    pub cont: [State<T>; 5],
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

pub fn dopri5_step<T, F>(f: &F, t: T, y: &State<T>, k1: &State<T>, h: T) -> Dopri5Step<T>
where
    T: Real,
    F: Fn(T, &State<T>) -> State<T>,
{
    let mut k = [[T::zero(); 2]; 7];
    k[0] = *k1;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a: T = lit(A[s][j]);
            if a != T::zero() {
                for i in 0..2 {
                    ys[i] = ys[i] + h * a * kj[i];
                }
            }
        }
        k[s] = f(t + h * lit(C[s]), &ys);
    }
    // stage 7 is evaluated at the 5th-order solution (FSAL)
    let mut y_new = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        let b: T = lit(A[6][j]);
        for i in 0..2 {
            y_new[i] = y_new[i] + h * b * kj[i];
        }
    }
    let mut err = [T::zero(); 2];
    let mut dense = [T::zero(); 2];
    for (j, kj) in k.iter().enumerate() {
        let (e, d): (T, T) = (lit(E[j]), lit(D[j]));
        for i in 0..2 {
            err[i] = err[i] + e * kj[i];
            dense[i] = dense[i] + d * kj[i];
        }
    }
    let mut cont = [[T::zero(); 2]; 5];
    for i in 0..2 {
        err[i] = err[i] * h;
        let ydiff = y_new[i] - y[i];
        let bspl = h * k[0][i] - ydiff;
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k[6][i] - bspl;
        cont[4][i] = h * dense[i];
    }
    Dopri5Step {
        y_new,
        k_last: k[6],
        err,
        cont,
    }
}

/// Continuous extension at `θ ∈ [0, 1]` of the step.
pub fn dense_eval<T: Real>(cont: &[State<T>; 5], theta: T) -> State<T> {
    let one_minus = T::one() - theta;
    let mut out = [T::zero(); 2];
    for (i, o) in out.iter_mut().enumerate() {
        *o = cont[0][i]
            + theta
                * (cont[1][i]
                    + one_minus * (cont[2][i] + theta * (cont[3][i] + one_minus * cont[4][i])));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_single_step() {
        // y' = y, y(0) = 1; one step of h = 0.1
        let f = |_t: f64, y: &State<f64>| [y[0], 2.0 * y[1]];
        let y0 = [1.0, 1.0];
        let step = dopri5_step(&f, 0.0, &y0, &f(0.0, &y0), 0.1);
        assert!((step.y_new[0] - 0.1f64.exp()).abs() < 1e-9);
        assert!((step.y_new[1] - 0.2f64.exp()).abs() < 1e-7);
        assert!(step.err[0].abs() < 1e-8);
        // dense output matches endpoints and the midpoint to 4th order
        let start = dense_eval(&step.cont, 0.0);
        let end = dense_eval(&step.cont, 1.0);
        assert_eq!(start, y0);
        assert!((end[0] - step.y_new[0]).abs() < 1e-15);
        let mid = dense_eval(&step.cont, 0.5);
        assert!((mid[0] - 0.05f64.exp()).abs() < 1e-7);
    }
}
