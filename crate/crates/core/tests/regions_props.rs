use blowup_core::regions::{lambda_fn, omega, shifted_dimension, Branch, SystemParams};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = SystemParams<f64>> {
    (
        1u32..=6,
        0.0..3.0f64,
        (0.0..6.0f64, 0.0..6.0f64),
        (0.0..1.0f64, 0.0..1.0f64),
        (1.01..6.0f64, 1.01..6.0f64),
    )
        .prop_map(|(n, m, (mu1, mu2), (f1, f2), (p, q))| {
            // ν² kept inside δ ≥ 0
            let nu1_sq = f1 * (mu1 - 1.0).powi(2) / 4.0;
            let nu2_sq = f2 * (mu2 - 1.0).powi(2) / 4.0;
            SystemParams {
                n,
                m,
                mu1,
                mu2,
                nu1_sq,
                nu2_sq,
                p,
                q,
                eps: 0.1,
                radius: 1.0,
            }
        })
}

/// `Ω(N, μ1, μ2, p, q)` of the flat case, written out independently.
fn flat_omega(n: f64, mu1: f64, mu2: f64, p: f64, q: f64) -> f64 {
    let a = (p + 1.0) / (p * q - 1.0) - (n + mu1 - 1.0) / 2.0;
    let b = (q + 1.0) / (p * q - 1.0) - (n + mu2 - 1.0) / 2.0;
    a.max(b)
}

proptest! {
    #[test]
    fn lambda_decreasing_in_d_and_q(d in 0.0..10.0f64, dd in 1e-3..5.0f64, p in 1.01..6.0f64,
                                    q in 1.01..6.0f64, dq in 1e-3..3.0f64) {
        let base = lambda_fn(d, p, q).unwrap();
        prop_assert!(lambda_fn(d + dd, p, q).unwrap() < base);
        prop_assert!(lambda_fn(d, p, q + dq).unwrap() < base);
    }

    #[test]
    fn omega_swap_invariant(s in system()) {
        let a = omega(&s).unwrap();
        let b = omega(&s.swapped()).unwrap();
        prop_assert_eq!(a.omega, b.omega);
        prop_assert_eq!(a.branch, b.branch);
    }

    #[test]
    fn flat_case_matches(mut s in system()) {
        s.m = 0.0;
        prop_assert_eq!(shifted_dimension(s.n, 0.0), s.n as f64);
        let got = omega(&s).unwrap().omega;
        let want = flat_omega(s.n as f64, s.mu1, s.mu2, s.p, s.q);
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn branch_partition(l1 in -5.0..5.0f64, l2 in -5.0..5.0f64, snap in 0u8..4) {
        // snap some draws onto the critical set so every branch is exercised
        let (l1, l2) = match snap { 0 => (0.0, l2.min(-1e-3)), 1 => (0.0, 0.0), _ => (l1, l2) };
        let b = Branch::from_lambdas(l1, l2);
        let om = l1.max(l2);
        let hits = [
            l1.abs() < 1e-12 && l2.abs() < 1e-12,
            om.abs() < 1e-12 && !(l1.abs() < 1e-12 && l2.abs() < 1e-12),
            om >= 1e-12,
            om <= -1e-12,
        ];
        prop_assert_eq!(hits.iter().filter(|h| **h).count(), 1);
        let expected = [Branch::DoublyCritical, Branch::Critical, Branch::Subcritical, Branch::OutsideTheorem];
        prop_assert_eq!(b, expected[hits.iter().position(|h| *h).unwrap()]);
    }
}

#[test]
fn figure_parameter_values() {
    let base: SystemParams<f64> = SystemParams {
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
    let a = omega(&base).unwrap();
    assert!((a.omega - 0.75).abs() < 1e-12);
    assert_eq!(a.branch, Branch::Subcritical);
    let c = omega(&SystemParams { mu1: 0.0, ..base }).unwrap();
    assert!((c.omega - 2.0).abs() < 1e-12);
    let e = omega(&SystemParams {
        n: 2,
        mu1: 3.0,
        mu2: 5.0,
        q: 1.25,
        ..base
    })
    .unwrap();
    assert!(e.omega.abs() < 1e-12);
    assert_eq!(e.branch, Branch::Critical);
}
