use photon_transport::atomic::*;
use photon_transport::medium::{MediumParams, OpenRates};
use photon_transport::{Complex, Error};
use proptest::prelude::*;

fn closed(beta: f64) -> MediumParams {
    MediumParams::closed(0.0, 0.0, beta, 1.0)
}

#[test]
fn saturation_parameter() {
    assert_eq!(saturation(&closed(0.007), 1.0).unwrap(), 0.056);
    assert_eq!(saturation(&closed(0.007), 0.0).unwrap(), 0.0);
    let g = 1e-7;
    let open = saturation(&closed(0.007).with_gamma(g), 1.0).unwrap();
    assert!((open / 0.056 - 1.0).abs() < 1e-6);
    assert!(saturation(&closed(0.007), -1.0).is_err());
}

#[test]
fn saturation_equals_population_change_at_resonance() {
    let r = OpenRates {
        gamma1: 0.05,
        gamma2: 1.2,
        gamma12: 0.7,
        gamma21: 1.0,
    };
    let p = closed(1e-2).with_open_rates(r);
    let s = steady_state(&p, 0.5, 0.0).unwrap();
    assert!(((1.0 - s.s11) + s.s22 - s.saturation).abs() < 1e-15);
}

#[test]
fn no_field_leaves_atom_in_ground_state() {
    let s = steady_state(&closed(1e-2).with_gamma(0.01), 0.0, 0.3).unwrap();
    assert_eq!((s.s11, s.s22), (1.0, 0.0));
    assert_eq!(s.s12, Complex::new(0.0, 0.0));
}

#[test]
fn closed_limit_populations() {
    let (beta, flux) = (1e-2, 1.0);
    let s = steady_state(&closed(beta), flux, 0.0).unwrap();
    // s22 = beta flux 2 gamma12 / (gamma2 gamma12^2) = 4 beta flux = S / 2
    assert!((s.s22 - 4.0 * beta * flux).abs() < 1e-16);
    assert!((s.s22 - s.saturation / 2.0).abs() < 1e-16);
    assert!((s.s11 + s.s22 - 1.0).abs() < 1e-15);
    assert_eq!(s.s21, s.s12.conj());
    // s12 = i sqrt(beta flux) / (1/2)
    assert!((s.s12 - Complex::new(0.0, 2.0 * (beta * flux).sqrt())).norm() < 1e-15);
    let moving = steady_state(&closed(beta), flux, 1.5).unwrap();
    assert!((moving.s22 - s.s22 * 0.25 / (0.25 + 2.25)).abs() < 1e-16);
}

#[test]
fn strong_field_is_rejected() {
    assert!(matches!(steady_state(&closed(1e-2), 20.0, 0.0), Err(Error::Saturated(_))));
}

#[test]
fn diffusion_matrix_entries() {
    let p = closed(1e-2).with_gamma(0.01);
    let r = p.rates();
    let s = steady_state(&p, 0.5, 0.2).unwrap();
    let d = diffusion_matrix(&s, &p);
    use Index::*;
    let re = |a, b| d.get(a, b).re;
    assert!((re(S21, S12) - (2.0 * r.gamma12 - r.gamma2) * s.s22).abs() < 1e-16);
    assert!((re(S11, S11) - (s.s22 + r.gamma1 * (1.0 - s.s11))).abs() < 1e-16);
    assert!((re(S22, S22) - r.gamma2 * s.s22).abs() < 1e-16);
    assert_eq!(d.get(S12, S11), -(r.gamma1 + 1.0) * s.s12);
    assert_eq!(d.get(S22, S21), r.gamma2 * s.s21);
    for (a, b) in DiffusionMatrix::STRUCTURAL_ZEROS {
        assert_eq!(d.get(a, b), Complex::new(0.0, 0.0));
    }
    let nonzero = Index::ORDER
        .iter()
        .flat_map(|a| Index::ORDER.iter().map(move |b| (*a, *b)))
        .filter(|(a, b)| d.get(*a, *b).norm() != 0.0)
        .count();
    assert_eq!(nonzero, 16 - DiffusionMatrix::STRUCTURAL_ZEROS.len());
}

#[test]
fn ideal_closed_system_has_no_thermal_source() {
    let p = closed(1e-2);
    let d = diffusion_matrix(&steady_state(&p, 1.0, 0.0).unwrap(), &p);
    assert_eq!(d.get(Index::S21, Index::S12).re, 0.0);
    let d0 = diffusion_matrix(&steady_state(&p, 0.0, 0.0).unwrap(), &p);
    assert_eq!(d0.get(Index::S12, Index::S21).re, 1.0);
    assert_eq!(d0.get(Index::S11, Index::S11).re, 0.0);
}

#[test]
fn thermal_source_vanishes_linearly_in_closed_limit() {
    let flux = 0.5;
    let ratio = |g: f64| {
        let p = closed(1e-2).with_gamma(g);
        let d = diffusion_matrix(&steady_state(&p, flux, 0.0).unwrap(), &p);
        d.get(Index::S21, Index::S12).re / g
    };
    let (a, b) = (ratio(1e-4), ratio(1e-6));
    assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
}

proptest! {
    #[test]
    fn populations_bounded_and_linear(
        beta in 1e-4f64..0.05, flux in 0.0f64..1.0, delta in -3.0f64..3.0,
        gamma in 0.0f64..0.2, kvz in -5.0f64..5.0
    ) {
        let p = MediumParams::closed(delta, 0.0, beta, 1.0).with_gamma(gamma);
        prop_assume!(saturation(&p, 2.0 * flux).unwrap() < 1.0);
        let s = steady_state(&p, flux, kvz).unwrap();
        let s2 = steady_state(&p, 2.0 * flux, kvz).unwrap();
        prop_assert!(s.s22 >= 0.0 && s.s11 <= 1.0);
        prop_assert!(s.s22 <= s.saturation / 2.0 * (1.0 + 1e-12));
        prop_assert!((s2.s22 - 2.0 * s.s22).abs() <= 1e-15 * s2.s22.max(1e-300));
        let d = diffusion_matrix(&s, &p);
        prop_assert!(d.get(Index::S21, Index::S12).re >= 0.0);
    }
}
