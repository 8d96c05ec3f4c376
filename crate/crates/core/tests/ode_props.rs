use blowup_core::blowup_ode::{
    exponents, fit_blowup_time, integrate, simultaneity_gap, IntegrationSettings, Termination,
};
use blowup_core::regions::SystemParams;
use proptest::prelude::*;

fn system(n: u32, mu1: f64, mu2: f64, q: f64, eps: f64) -> SystemParams<f64> {
    SystemParams {
        n,
        m: 1.0,
        mu1,
        mu2,
        nu1_sq: 0.0,
        nu2_sq: 0.0,
        p: 2.0,
        q,
        eps,
        radius: 1.0,
    }
}

/// The six figure parameter sets with the horizons used for them.
fn figure_runs() -> Vec<(SystemParams<f64>, f64)> {
    vec![
        (system(1, 4.0, 2.0, 1.5, 0.1), 1e5),
        (system(1, 4.0, 2.0, 1.5, 0.01), 1e5),
        (system(1, 0.0, 2.0, 1.5, 0.1), 1e5),
        (system(1, 0.0, 2.0, 1.5, 0.01), 1e5),
        (system(2, 3.0, 5.0, 1.25, 0.1), 960.0),
        (system(2, 3.0, 5.0, 1.25, 0.01), 9600.0),
    ]
}

/// Classical fixed-step RK4 on the untransformed system.
fn rk4(params: &SystemParams<f64>, t_end: f64, h: f64) -> [f64; 2] {
    let e = exponents(params);
    let f = |t: f64, y: [f64; 2]| {
        [
            y[1].powf(params.p) * t.powf(e.a1),
            y[0].powf(params.q) * t.powf(e.a2),
        ]
    };
    let steps = ((t_end - 1.0) / h).round() as usize;
    let mut y = [params.eps; 2];
    for i in 0..steps {
        let t = 1.0 + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(
            t + h / 2.0,
            [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]],
        );
        let k3 = f(
            t + h / 2.0,
            [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]],
        );
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

#[test]
fn exponent_examples() {
    let e = exponents(&system(1, 4.0, 2.0, 1.5, 0.1));
    assert!((e.a1 - 0.5f64).abs() < 1e-15 && (e.a2 + 1.75f64).abs() < 1e-15);
    let flat = SystemParams {
        m: 0.0,
        mu1: 0.0,
        mu2: 0.0,
        ..system(1, 0.0, 0.0, 3.0, 0.1)
    };
    let e = exponents(&flat);
    assert_eq!((e.a1, e.a2), (0.0, 0.0));
}

#[test]
fn monotone_and_positive_on_all_figures() {
    for (params, horizon) in figure_runs() {
        let settings = IntegrationSettings::default().with_horizon(horizon);
        let res = integrate(&params, &settings).unwrap();
        let s = &res.trajectory.samples;
        assert!(s.len() > 2);
        for w in s.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!(
                w[1].y1 >= w[0].y1 && w[1].y2 >= w[0].y2,
                "{params:?} at t={}",
                w[1].t
            );
        }
        assert!(s.iter().all(|x| x.y1 > 0.0 && x.y2 > 0.0));
    }
}

#[test]
fn matches_fixed_step_rk4() {
    for params in [system(1, 4.0, 2.0, 1.5, 0.1), system(1, 0.0, 2.0, 1.5, 0.1)] {
        let res = integrate(&params, &IntegrationSettings::default().with_horizon(5.0)).unwrap();
        assert_eq!(res.termination, Termination::HorizonReached);
        let last = res.trajectory.samples.last().unwrap();
        assert_eq!(last.t, 5.0);
        let oracle = rk4(&params, 5.0, 1e-5);
        for (got, want) in [(last.y1, oracle[0]), (last.y2, oracle[1])] {
            assert!((got - want).abs() < 1e-6 * want, "{got} vs {want}");
        }
    }
}

#[test]
fn threshold_robustness_and_simultaneity() {
    let res = integrate(
        &system(1, 4.0, 2.0, 1.5, 0.1),
        &IntegrationSettings::default(),
    )
    .unwrap();
    assert!(res.blew_up);
    let spread = res.threshold_spread();
    let (t6, t10) = (spread[0].unwrap(), spread[2].unwrap());
    assert!(spread[1].unwrap() >= t6 && t10 >= spread[1].unwrap());
    assert!(t10 - t6 < 0.02 * t10, "{t6} .. {t10}");
    let tb = res.t_b_estimate.unwrap();
    assert!(tb >= t10);
    assert!(simultaneity_gap(&res, 1e6).unwrap() < 0.05);
    let c = integrate(
        &system(1, 0.0, 2.0, 1.5, 0.1),
        &IntegrationSettings::default(),
    )
    .unwrap();
    assert!(simultaneity_gap(&c, 1e6).unwrap().is_finite());
}

#[test]
fn tolerance_convergence() {
    let params = system(1, 4.0, 2.0, 1.5, 0.1);
    let coarse = integrate(&params, &IntegrationSettings::default()).unwrap();
    let fine = integrate(
        &params,
        &IntegrationSettings::default().with_tolerances(5e-9, 5e-13),
    )
    .unwrap();
    let (a, b) = (coarse.t_b_estimate.unwrap(), fine.t_b_estimate.unwrap());
    assert!((a - b).abs() < 0.005 * b, "{a} vs {b}");
}

#[test]
fn blowup_time_fit_recovers_synthetic_singularity() {
    // Y = 3 (10 - t)^{-2}
    let times: Vec<f64> = (0..20)
        .map(|i| 9.0 + 0.999 * (1.0 - 0.7f64.powi(i)))
        .collect();
    let logs: Vec<f64> = times
        .iter()
        .map(|t| 3f64.ln() - 2.0 * (10.0 - t).ln())
        .collect();
    let (tb, alpha) = fit_blowup_time(&times, &logs).unwrap();
    assert!((tb - 10.0).abs() < 1e-6, "{tb}");
    assert!((alpha - 2.0).abs() < 1e-4, "{alpha}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symmetric_components_coincide(
        n in 1u32..=3, m in 0.0..1.5f64, mu in 0.0..3.0f64, p in 1.5..3.0f64, eps in 0.05..0.5f64,
    ) {
        let params = SystemParams {
            n, m, mu1: mu, mu2: mu, nu1_sq: 0.0, nu2_sq: 0.0, p, q: p, eps, radius: 1.0,
        };
        let settings = IntegrationSettings::default().with_horizon(1e3);
        let res = integrate(&params, &settings).unwrap();
        let tol = 10.0 * settings.rtol;
        for s in &res.trajectory.samples {
            prop_assert!((s.y1 - s.y2).abs() <= tol * s.y1.max(s.y2));
        }
        if res.blew_up {
            prop_assert_eq!(simultaneity_gap(&res, 1e6).unwrap(), 0.0);
        }
    }

    #[test]
    fn trajectories_nondecreasing(
        n in 1u32..=3, m in 0.0..1.5f64, mu1 in 0.0..5.0f64, mu2 in 0.0..5.0f64,
        p in 1.2..3.0f64, q in 1.2..3.0f64, eps in 0.05..1.0f64,
    ) {
        let params = SystemParams {
            n, m, mu1, mu2, nu1_sq: 0.0, nu2_sq: 0.0, p, q, eps, radius: 1.0,
        };
        let res = integrate(&params, &IntegrationSettings::default().with_horizon(1e3)).unwrap();
        for w in res.trajectory.samples.windows(2) {
            prop_assert!(w[1].t > w[0].t);
            prop_assert!(w[1].y1 >= w[0].y1 && w[1].y2 >= w[0].y2);
        }
        prop_assert!(res.trajectory.samples.iter().all(|s| s.y1 > 0.0 && s.y2 > 0.0));
    }
}
