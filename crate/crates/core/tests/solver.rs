mod common;

use common::*;
use photon_transport::correlation::g2_zero;
use photon_transport::medium::{alpha0_from_od, MediumParams};
use photon_transport::quadrature::Numerics;
use photon_transport::solver::*;
use photon_transport::spectra::{psi_b_zero, psi_s_zero};
use photon_transport::{Complex, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn resonant(beta: f64, kv0: f64) -> MediumParams {
    MediumParams::closed(0.0, kv0, beta, 1.0)
}

fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn resonant_depth_cold_atoms() {
    let num = Numerics::default();
    for &(beta, quoted, frozen) in &[(1e-2, 5.88, 5.872946), (1e-3, 8.44, 8.429795)] {
        let a = solve_od_a_resonant(&resonant(beta, 0.0), &num).unwrap();
        assert!(a.converged && a.residual < 1e-8, "{a:?}");
        assert!((a.od_a - quoted).abs() < 0.02);
        assert!((a.od_a - frozen).abs() < 1e-6, "{}", a.od_a);
        let z = g2_zero(&resonant(beta, 0.0).with_od(a.od_a), &num).unwrap();
        assert!(z.g2 < 1e-4, "{}", z.g2);
    }
}

#[test]
fn resonant_depth_with_doppler_matches_oracle_bisection() {
    let a = solve_od_a_resonant(&resonant(1e-2, 10.0), &Numerics::default()).unwrap();
    let o = bisect(|od| (1e-2f64).ln() + psi_b_zero_oracle(od, 0.0, 10.0).norm().ln() + od, 8.3, 8.8, 1e-8);
    assert!((a.od_a - o).abs() < 1e-6, "{} vs {o}", a.od_a);
    assert!(a.od_a > 5.9);
}

#[test]
fn resonant_depth_grows_with_doppler_width() {
    let num = Numerics::default();
    let mut last = 0.0;
    for &kv0 in &[0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let a = solve_od_a_resonant(&resonant(1e-2, kv0), &num).unwrap();
        assert!(a.od_a >= last, "kv0={kv0}: {} < {last}", a.od_a);
        last = a.od_a;
    }
}

#[test]
fn resonant_solver_rejects_bad_input() {
    let num = Numerics::default();
    let e = solve_od_a_resonant(&resonant(0.9, 0.0), &num).unwrap_err();
    assert!(matches!(e, Error::NoRoot { .. }), "{e}");
    assert!(matches!(
        solve_od_a_resonant(&resonant(1e-2, 0.0).with_delta(0.3), &num),
        Err(Error::InvalidParams(_))
    ));
    let a = solve_od_a_in(&resonant(1e-5, 0.0), 1.0, 40.0, &num).unwrap();
    assert!(a.converged && a.od_a > 10.0);
}

#[test]
fn asymptotic_depth_and_gap_to_exact() {
    let num = Numerics::default();
    for &(beta, quoted, gap) in &[(1e-2, 6.08, 0.2), (1e-3, 8.55, 0.11)] {
        let p = resonant(beta, 0.0);
        let a = solve_od_a_asymptotic(&p).unwrap();
        assert!(a.converged && (a.od_a - quoted).abs() < 0.01, "{a:?}");
        // beta e^{OD} = sqrt(pi OD) without Doppler
        assert!((beta * a.od_a.exp() / (PI * a.od_a).sqrt() - 1.0).abs() < 1e-10);
        let exact = solve_od_a_resonant(&p, &num).unwrap().od_a;
        assert!(a.od_a > exact && ((a.od_a - exact) - gap).abs() < 0.05);
    }
}

#[test]
fn homogeneous_asymptotic_value() {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 10.0);
    let v = psi_b_zero_asymptotic(&p).unwrap();
    assert!((v.re + 1.0 / (10.0 * PI).sqrt()).abs() < 1e-15 && v.im == 0.0);
    assert!((v.re + 0.1784).abs() < 1e-4);
    // alpha0 L = od (1 + 4 delta^2) off resonance
    let p = MediumParams::closed(0.5, 0.0, 1e-2, 10.0);
    let v = psi_b_zero_asymptotic(&p).unwrap();
    let d = Complex::new(20.0, 0.0) * Complex::new(1.0, -1.0);
    assert!((v + 1.0 / (PI * d).sqrt()).norm() < 1e-15);
}

#[test]
fn bessel_form_matches_direct_integral() {
    for &(od, delta, kv0) in &[(10.0, 0.0, 2.0), (8.0, 0.3, 5.0), (20.0, -1.0, 15.0)] {
        let p = MediumParams::closed(delta, kv0, 1e-2, od);
        let a = AsymptoticParams::new(&p).unwrap();
        let depth = alpha0_from_od(&p).unwrap() * Complex::new(1.0, -2.0 * delta);
        assert!((a.depth() - depth).norm() < 1e-12 * depth.norm());
        // y = t^2 in int y^{-1/2} exp(-y - y^2 / (8 mu^2)) dy
        let c = 1.0 / (8.0 * a.mu * a.mu);
        let f = |t: f64| 2.0 * (-(t * t) - c * t.powi(4)).exp();
        let i = integrate_panels(&f, &[0.0, 0.5, 1.0, 2.0, 4.0, 8.0], 1e-14);
        let direct = -i / (PI * depth.sqrt());
        let v = a.bessel_form().unwrap();
        assert!(rel_err(v, direct) < 1e-10, "{v} vs {direct}");
        assert_eq!(v, psi_b_zero_asymptotic(&p).unwrap());
    }
}

#[test]
fn bessel_form_approaches_homogeneous_limit() {
    let cold = psi_b_zero_asymptotic(&MediumParams::closed(0.0, 0.0, 1e-2, 10.0)).unwrap();
    let warm = psi_b_zero_asymptotic(&MediumParams::closed(0.0, 1e-3, 1e-2, 10.0)).unwrap();
    assert!(rel_err(warm, cold) < 1e-3, "{warm} vs {cold}");
    let a0 = solve_od_a_asymptotic(&resonant(1e-2, 0.0)).unwrap().od_a;
    let a1 = solve_od_a_asymptotic(&resonant(1e-2, 1e-3)).unwrap().od_a;
    assert!((a1 - a0).abs() < 1e-3);
}

#[test]
fn small_mu_form_is_the_leading_term() {
    let gamma_m14 = -4.901_666_809_585_472;
    let gamma_14 = 3.625_609_908_221_908;
    for &mu in &[0.05, 0.005] {
        let a = AsymptoticParams {
            mu: Complex::new(mu, 0.0),
            eta: 0.1,
        };
        let r = a.bessel_form().unwrap() / a.small_mu_form();
        // e^{mu^2} (1 + Gamma(-1/4)/Gamma(1/4) (mu^2/2)^{1/2})
        let lead = (mu * mu).exp() * (1.0 + gamma_m14 / gamma_14 * mu / 2f64.sqrt());
        assert!((r.re / lead - 1.0).abs() < 1e-4 && r.im.abs() < 1e-15, "mu={mu}: {r}");
    }
    let p = MediumParams::closed(0.0, 400.0, 1e-2, 10.0);
    assert!(psi_b_zero_small_mu(&p).is_ok());
    assert!(AsymptoticParams::new(&resonant(1e-2, 0.0)).is_err());
}

#[test]
fn spontaneous_asymptotic_value() {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 10.0).with_gamma(0.01);
    let v = psi_s_zero_asymptotic(&p).unwrap();
    assert_eq!(v, 0.01 / (10.0 * PI).sqrt());
    assert!((v - 1.784e-3).abs() < 1e-6);
    assert_eq!(psi_s_zero_asymptotic(&p.with_gamma(0.0)).unwrap(), 0.0);
    assert!(psi_s_zero_asymptotic(&p.with_kv0(1.0)).is_err());
    let p = p.with_od(20.0);
    let exact = psi_s_zero(&p, &Numerics::default()).unwrap();
    let asym = psi_s_zero_asymptotic(&p).unwrap();
    assert!((exact / asym - 1.0).abs() < 0.05, "{exact} vs {asym}");
}

#[test]
fn open_system_floor() {
    let num = Numerics::default();
    let p = resonant(1e-2, 0.0).with_gamma(0.01);
    assert_eq!(g2_floor_asymptotic(&p).unwrap(), 0.04);
    assert_eq!(g2_floor_asymptotic(&p.with_gamma(0.0)).unwrap(), 0.0);
    assert!(g2_floor_asymptotic(&p.with_kv0(2.0)).is_err());
    for &(beta, kv0) in &[(1e-2, 0.0), (1e-3, 2.0), (1e-2, 20.0)] {
        let od = solve_od_a_resonant(&resonant(beta, kv0), &num).unwrap().od_a;
        let q = resonant(beta, kv0).with_od(od).with_gamma(0.01);
        let f = g2_floor_open(&q, &num).unwrap() / 0.01;
        assert!((3.5..=5.5).contains(&f), "beta={beta} kv0={kv0}: {f}");
        let direct = 4.0 * psi_s_zero(&q, &num).unwrap() / psi_b_zero(&q, &num).unwrap().norm();
        assert!((f * 0.01 - direct).abs() < 1e-12);
    }
    assert_eq!(g2_floor_open(&p.with_gamma(0.0).with_od(5.0), &num).unwrap(), 0.0);
}

#[test]
fn detuned_branches_of_the_asymptotic_system() {
    let b1 = solve_detuned_branch(1e-2, 1).unwrap();
    let b2 = solve_detuned_branch(1e-2, 2).unwrap();
    assert!(b1.converged && b2.converged && b1.residual < 1e-10 && b2.residual < 1e-10);
    assert!((b1.od_a - 6.56).abs() < 0.02 && (b1.delta_a - 0.450).abs() < 0.002, "{b1:?}");
    assert!((b2.od_a - 7.16).abs() < 0.02 && (b2.delta_a - 0.841).abs() < 0.002, "{b2:?}");
    assert!(b1.od_a < b2.od_a && b1.delta_a < b2.delta_a);
    for b in [b1, b2] {
        let s = 1.0 + 4.0 * b.delta_a * b.delta_a;
        let lhs = 1e-2 * b.od_a.exp();
        assert!((lhs / ((PI * b.od_a).sqrt() * s.powf(0.75)) - 1.0).abs() < 1e-10);
    }
    assert_eq!(b1.mirrored().delta_a, -b1.delta_a);
    assert!(solve_detuned_branch(1e-2, 0).is_err());
}

#[test]
fn detuned_branches_of_the_exact_condition() {
    let num = Numerics::default();
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let e1 = solve_detuned_exact(&p, 1, &num).unwrap();
    assert!(e1.converged, "{e1:?}");
    assert!((e1.od_a - 6.53555).abs() < 1e-4 && (e1.delta_a - 0.45715).abs() < 1e-4, "{e1:?}");
    let m = e1.mirrored();
    let r = cancellation(&p.with_od(m.od_a).with_delta(m.delta_a), &num).unwrap();
    assert!(r.norm() < 1e-8);
    let e2 = solve_detuned_exact(&p, 2, &num).unwrap();
    assert!((e2.od_a - 7.17118).abs() < 1e-4 && (e2.delta_a - 0.84354).abs() < 1e-4, "{e2:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn asymptotic_root_satisfies_closed_form(lb in -4.0f64..-1.5) {
        let beta = 10f64.powf(lb);
        let a = solve_od_a_asymptotic(&resonant(beta, 0.0)).unwrap();
        prop_assert!(a.converged);
        prop_assert!((beta.ln() + a.od_a - 0.5 * (PI * a.od_a).ln()).abs() < 1e-10);
    }

    #[test]
    fn branch_depths_increase_with_order(lb in -4.0f64..-1.5, n in 1u32..4) {
        let beta = 10f64.powf(lb);
        let lo = solve_detuned_branch(beta, n).unwrap();
        let hi = solve_detuned_branch(beta, n + 1).unwrap();
        prop_assert!(lo.converged && hi.converged);
        prop_assert!(lo.od_a < hi.od_a && lo.delta_a < hi.delta_a && lo.delta_a > 0.0);
    }
}
