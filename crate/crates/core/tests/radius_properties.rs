use analyticity::radius::{
    analyse, check_condition2, integrate_ln_tau_ode, lower_bound, solve_ln_tau, RadiusParams, RadiusSample,
    RadiusTrajectory,
};
use proptest::prelude::*;

fn params(tau0: f64, u0_hr: f64, u0_x: f64) -> RadiusParams {
    RadiusParams { c: 1.0, s: 1.0, r: 5.0, tau0, u0_hr, u0_x }
}

fn trajectory(p: RadiusParams, n: usize, t_end: f64, g: impl Fn(f64) -> f64, h: impl Fn(f64) -> f64) -> RadiusTrajectory {
    let samples = (0..=n).map(|i| {
        let t = t_end * i as f64 / n as f64;
        RadiusSample { t, grad_sup: g(t), hr_norm: h(t), tau_measured: None }
    });
    RadiusTrajectory::from_samples(p, samples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ode_radius_is_positive_and_decreasing(tau0 in 0.05..2.0f64, g in 0.0..3.0f64, h in 0.0..3.0f64) {
        let traj = trajectory(params(tau0, h, 1.0), 40, 2.0, |t| g * (1.0 + t), |_| h);
        let ln_tau = integrate_ln_tau_ode(&traj).unwrap();
        prop_assert!((ln_tau[0] - tau0.ln()).abs() < 1e-15);
        for w in ln_tau.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        // the nonlinear term only speeds the decay: τ ≤ τ₀/G
        for (l, lg) in ln_tau.iter().zip(traj.ln_g()) {
            prop_assert!(*l <= tau0.ln() - lg + 1e-12);
        }
    }

    #[test]
    fn stronger_gradients_shrink_the_radius(tau0 in 0.1..1.0f64, g in 0.1..2.0f64, boost in 1.01..3.0f64) {
        let slow = trajectory(params(tau0, 1.0, 1.0), 20, 1.0, |_| g, |_| 1.0);
        let fast = trajectory(params(tau0, 1.0, 1.0), 20, 1.0, |_| g * boost, |_| 1.0);
        let (a, b) = (integrate_ln_tau_ode(&slow).unwrap(), integrate_ln_tau_ode(&fast).unwrap());
        prop_assert!(b.last().unwrap() < a.last().unwrap());
    }

    #[test]
    fn solver_converges_under_refinement(tau0 in 0.1..1.0f64, a in 0.0..2.0f64, b in 0.0..2.0f64) {
        let times = [0.0, 0.5, 1.0];
        let coeffs = |t: f64| (a * (1.0 + t.sin()), b * (2.0 + (3.0 * t).cos()));
        let coarse = solve_ln_tau(tau0, &times, coeffs, 1e-2).unwrap();
        let fine = solve_ln_tau(tau0, &times, coeffs, 1e-3).unwrap();
        prop_assert!((coarse[2] - fine[2]).abs() < 1e-8);
    }

    #[test]
    fn ode_radius_satisfies_the_condition(tau0 in 0.1..1.0f64, g in 0.0..1.0f64) {
        let traj = trajectory(params(tau0, 0.3, 0.5), 800, 1.0, |t| g * (1.0 + 0.5 * t), |_| 0.3);
        let tau: Vec<f64> = integrate_ln_tau_ode(&traj).unwrap().into_iter().map(f64::exp).collect();
        prop_assert!(check_condition2(&tau, &traj).unwrap().max_abs < 1e-5);
    }
}

#[test]
fn lower_bound_crosses_the_ode_radius_even_without_gradient_growth() {
    // with G ≡ 1 the bound decays like 1/(1+t) while the ODE radius decays
    // like (1+t)^{-4}; they start ordered and cross near t = 1.6
    let p = params(1.0, 0.2, 0.3);
    let traj = trajectory(p, 2000, 2.0, |_| 0.0, |_| 0.2);
    let report = analyse(&traj).unwrap();
    let first = &report.rows[0];
    assert!(first.tau_ode >= first.tau_lower);
    let cross = report.rows.iter().find(|r| r.tau_ode < r.tau_lower).map(|r| r.t).unwrap();
    assert!(cross > 1.0 && cross < 2.0, "{cross}");
    assert!(report.ode_condition.unwrap().max_abs < 1e-6);
}

#[test]
fn lower_bound_can_exceed_the_ode_radius_under_linear_gradient_growth() {
    // the shear flow's ‖∇u‖∞ = t makes ln G = t²/2: the ODE radius decays
    // like G^{-1} while the bound decays like G^{-1/2}
    let p = params(1.0, 1.0, 1.0);
    let traj = trajectory(p, 200, 20.0, |t| t.max(1.0), |t| 1.0 + t);
    let report = analyse(&traj).unwrap();
    let last = report.rows.last().unwrap();
    assert!(last.ln_tau_ode < last.ln_tau_lower);
    assert!(last.ln_g > 190.0);
}

#[test]
fn constant_of_the_bound_covers_the_initial_radius() {
    for tau0 in [0.1, 0.5, 1.0, 2.0] {
        let traj = trajectory(params(tau0, 0.7, 1.1), 10, 5.0, |_| 1.0, |_| 0.7);
        let lb = lower_bound(&traj).unwrap();
        // C₀ ≥ τ₀^{−1/2} so τ_lb(0) ≤ τ₀^{1/2}
        assert!(lb.c0 >= tau0.powf(-0.5) - 1e-15);
        assert!(lb.ln_tau[0] <= 0.5 * tau0.ln() + 1e-15);
    }
}

#[test]
fn samples_must_advance_in_time() {
    let mut traj = RadiusTrajectory::new(params(1.0, 1.0, 1.0)).unwrap();
    let s = |t| RadiusSample { t, grad_sup: 1.0, hr_norm: 1.0, tau_measured: None };
    traj.accumulate(s(0.0)).unwrap();
    traj.accumulate(s(0.5)).unwrap();
    assert!(traj.accumulate(s(0.5)).is_err());
    assert!(traj.accumulate(s(0.2)).is_err());
    assert_eq!(traj.len(), 2);
}

#[test]
fn invalid_sobolev_index_is_rejected() {
    let mut p = params(1.0, 1.0, 1.0);
    p.r = 4.5;
    assert!(RadiusTrajectory::new(p).is_err());
}
