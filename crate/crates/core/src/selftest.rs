//! Reduced-size invariant checks across all modules.

use crate::atomic::{diffusion_matrix, steady_state, DiffusionMatrix};
use crate::correlation::{g2_normalized, g2_zero, linspace, CorrelationOptions};
use crate::medium::{alpha, voigt_hwhm, Absorber, MediumParams};
use crate::quadrature::{maxwell_average, Numerics};
use crate::solver::{
    cancellation, g2_floor_asymptotic, solve_detuned_branch, solve_od_a_asymptotic,
    solve_od_a_resonant,
};
use crate::spectra::{fourier_at, psi_b_low_od_tau, psi_b_spectrum, psi_b_zero, psi_s_zero};
use crate::sweep::{run_sweep, Axis, AxisName, Quantity, SweepSpec};
use crate::Complex;
use std::time::Instant;

type CheckResult = std::result::Result<(), String>;

pub struct Check {
    pub name: &'static str,
    /// Part of the `--quick` subset.
    pub quick: bool,
    pub run: fn(&Numerics) -> CheckResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> CheckResult {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn near(what: &str, got: f64, want: f64, tol: f64) -> CheckResult {
    ensure((got - want).abs() <= tol, || format!("{what} = {got}, expected {want} +- {tol}"))
}

fn quadrature_convergence(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.3, 3.0, 1e-2, 2.0).with_gamma(0.01);
    psi_b_zero(&p, num).map_err(|e| e.to_string())?;
    psi_s_zero(&p, num).map_err(|e| e.to_string())?;
    let a = Absorber::new(&p).map_err(|e| e.to_string())?;
    let direct = maxwell_average(
        |u| 1.0 / Complex::new(a.g, -(p.delta + u)),
        p.kv0,
        &[-p.delta],
        num,
        "Doppler average of the Lorentzian",
    )
    .map_err(|e| e.to_string())?
        * (a.alpha0_l * a.g);
    let fast = alpha(&p, 0.0).map_err(|e| e.to_string())?;
    ensure((direct - fast).norm() <= 1e-7 * fast.norm(), || {
        format!("alpha(0) {fast} against direct average {direct}")
    })
}

fn voigt_widths(_: &Numerics) -> CheckResult {
    let w = |kv0| voigt_hwhm(&MediumParams::closed(0.0, kv0, 1e-2, 1.0));
    near("hwhm(kv0=0)", w(0.0), 0.5, 1e-12)?;
    near("hwhm(kv0=10)", w(10.0), 8.60, 0.05)?;
    for kv0 in [1.0, 3.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 1.0);
        let h = w(kv0);
        let (a0, ah) = (alpha(&p, 0.0), alpha(&p, h));
        let (a0, ah) = (a0.map_err(|e| e.to_string())?.re, ah.map_err(|e| e.to_string())?.re);
        near("Re alpha at the half width", ah / a0, 0.5, 1e-8)?;
    }
    Ok(())
}

fn alpha_mirror_symmetry(_: &Numerics) -> CheckResult {
    for &(delta, kv0, w) in &[(0.4, 0.0, 1.3), (-1.1, 2.0, 0.2), (0.7, 10.0, -3.0)] {
        let p = MediumParams::closed(delta, kv0, 1e-2, 2.0);
        let a = alpha(&p, w).map_err(|e| e.to_string())?;
        let b = alpha(&p.with_delta(-delta), -w).map_err(|e| e.to_string())?;
        ensure((a - b.conj()).norm() <= 1e-12 * a.norm(), || {
            format!("alpha({w}; {delta}) = {a}, mirrored {b}")
        })?;
    }
    Ok(())
}

fn transform_zero_delay(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.2, 1.0, 1e-2, 3.0);
    let q = psi_b_zero(&p, num).map_err(|e| e.to_string())?;
    let spec = psi_b_spectrum(&p, crate::medium::Grid::default_for(&p)).map_err(|e| e.to_string())?;
    let t = fourier_at(&spec, &[0.0], 1e-8).map_err(|e| e.to_string())?[0];
    ensure((q - t).norm() <= 1e-6 * q.norm(), || format!("quadrature {q}, transform {t}"))
}

fn low_depth_limit(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1e-3);
    let taus = [0.5, 1.0, 2.0, 5.0];
    let spec = psi_b_spectrum(&p, crate::medium::Grid::default_for(&p)).map_err(|e| e.to_string())?;
    let exact = fourier_at(&spec, &taus, 1e-8).map_err(|e| e.to_string())?;
    for (t, e) in taus.iter().zip(exact) {
        let l = psi_b_low_od_tau(&p, *t, num).map_err(|e| e.to_string())?;
        ensure((e - l).norm() <= 5e-3 * l.norm(), || format!("tau = {t}: {e} against {l}"))?;
    }
    Ok(())
}

fn detuning_parity(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.7, 1.5, 1e-2, 3.0).with_gamma(0.01);
    let a = g2_zero(&p, num).map_err(|e| e.to_string())?.g2;
    let b = g2_zero(&p.with_delta(-0.7), num).map_err(|e| e.to_string())?.g2;
    ensure((a - b).abs() <= 1e-10 * a.abs(), || format!("g2(0) {a} against {b}"))
}

fn transparent_medium(num: &Numerics) -> CheckResult {
    let g = g2_zero(&MediumParams::closed(0.3, 2.0, 1e-2, 0.0), num)
        .map_err(|e| e.to_string())?
        .g2;
    near("g2(0) at od = 0", g, 1.0, 1e-12)
}

fn flux_independence(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 1.0, 1e-2, 4.0).with_gamma(0.01);
    let opts = CorrelationOptions {
        points: 1024,
        ..Default::default()
    };
    let a = g2_normalized(&p, &opts, num).map_err(|e| e.to_string())?;
    let b = g2_normalized(&p, &CorrelationOptions { phi0: 7.0, ..opts }, num).map_err(|e| e.to_string())?;
    ensure(a.g2 == b.g2, || "g2 changes with the incident flux".into())
}

fn width_collapse(num: &Numerics) -> CheckResult {
    let mut widths = Vec::new();
    for kv0 in [0.0, 1.0, 10.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 1.0);
        let od_a = solve_od_a_resonant(&p, num).map_err(|e| e.to_string())?.od_a;
        let r = g2_normalized(&p.with_od(od_a), &CorrelationOptions::default(), num)
            .map_err(|e| e.to_string())?;
        widths.push(r.half_delay().ok_or("g2 never relaxes")? * r.hwhm);
    }
    let mean = widths.iter().sum::<f64>() / 3.0;
    ensure(widths.iter().all(|w| (w / mean - 1.0).abs() < 0.1), || {
        format!("scaled half delays {widths:?}")
    })
}

fn resonant_depth(num: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let a = solve_od_a_resonant(&p, num).map_err(|e| e.to_string())?;
    near("od_a", a.od_a, 5.88, 0.02)?;
    let c = cancellation(&p.with_od(a.od_a), num).map_err(|e| e.to_string())?;
    ensure(c.norm() < 1e-8, || format!("residual amplitude {c}"))
}

fn asymptotic_depth(_: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let a = solve_od_a_asymptotic(&p).map_err(|e| e.to_string())?;
    near("asymptotic od_a", a.od_a, 6.08, 0.01)
}

fn detuned_branches(_: &Numerics) -> CheckResult {
    for (n, od, delta) in [(1, 6.56, 0.450), (2, 7.16, 0.841)] {
        let b = solve_detuned_branch(1e-2, n).map_err(|e| e.to_string())?;
        near("branch od_a", b.od_a, od, 0.02)?;
        near("branch delta_a", b.delta_a, delta, 0.002)?;
    }
    Ok(())
}

fn depth_grows_with_doppler(num: &Numerics) -> CheckResult {
    let mut last = 0.0;
    for kv0 in [0.0, 2.0, 5.0, 10.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 1.0);
        let od = solve_od_a_resonant(&p, num).map_err(|e| e.to_string())?.od_a;
        ensure(od >= last, || format!("od_a({kv0}) = {od} below {last}"))?;
        last = od;
    }
    Ok(())
}

fn floor_limit(_: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0).with_gamma(0.01);
    let f = g2_floor_asymptotic(&p).map_err(|e| e.to_string())?;
    ensure(f == 4.0 * 0.01, || format!("floor {f}"))
}

fn closed_steady_state(_: &Numerics) -> CheckResult {
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let s = steady_state(&p, 1.0, 0.0).map_err(|e| e.to_string())?;
    near("s11 + s22", s.s11 + s.s22, 1.0, 1e-15)?;
    let d = diffusion_matrix(&s, &p);
    for (a, b) in DiffusionMatrix::STRUCTURAL_ZEROS {
        ensure(d.get(a, b) == Complex::new(0.0, 0.0), || {
            format!("D({}, {}) is not zero", a.label(), b.label())
        })?;
    }
    Ok(())
}

fn sweep_determinism(num: &Numerics) -> CheckResult {
    let mut spec = SweepSpec::new(
        MediumParams::closed(0.0, 0.0, 1e-2, 1.0),
        vec![
            Axis {
                name: AxisName::Od,
                values: linspace(0.0, 8.0, 6),
            },
            Axis {
                name: AxisName::Delta,
                values: linspace(-1.0, 1.0, 5),
            },
        ],
        Quantity::G2Zero,
    );
    spec.numerics = *num;
    let a = run_sweep(&spec, 1).map_err(|e| e.to_string())?;
    let b = run_sweep(&spec, 4).map_err(|e| e.to_string())?;
    ensure(a.all_converged(), || format!("{} cells did not converge", a.failed_cells()))?;
    ensure(a.canonical_bytes() == b.canonical_bytes(), || {
        "results differ between 1 and 4 workers".into()
    })
}

pub fn checks() -> Vec<Check> {
    macro_rules! check {
        ($name:expr, $quick:expr, $f:ident) => {
            Check {
                name: $name,
                quick: $quick,
                run: $f,
            }
        };
    }
    vec![
        check!("quadrature.convergence", true, quadrature_convergence),
        check!("medium.voigt_widths", true, voigt_widths),
        check!("medium.alpha_mirror_symmetry", true, alpha_mirror_symmetry),
        check!("spectra.transform_zero_delay", true, transform_zero_delay),
        check!("spectra.low_depth_limit", false, low_depth_limit),
        check!("correlation.detuning_parity", true, detuning_parity),
        check!("correlation.transparent_medium", true, transparent_medium),
        check!("correlation.flux_independence", false, flux_independence),
        check!("correlation.width_collapse", false, width_collapse),
        check!("solver.resonant_depth", true, resonant_depth),
        check!("solver.asymptotic_depth", true, asymptotic_depth),
        check!("solver.detuned_branches", true, detuned_branches),
        check!("solver.depth_grows_with_doppler", false, depth_grows_with_doppler),
        check!("solver.floor_limit", true, floor_limit),
        check!("atomic.closed_steady_state", true, closed_steady_state),
        check!("sweep.determinism", true, sweep_determinism),
    ]
}

/// Runs every check (or the quick subset) with the given numerics.
pub fn run(quick: bool, num: &Numerics) -> Vec<Outcome> {
    checks()
        .into_iter()
        .filter(|c| c.quick || !quick)
        .map(|c| {
            let start = Instant::now();
            let r = (c.run)(num);
            Outcome {
                name: c.name,
                passed: r.is_ok(),
                seconds: start.elapsed().as_secs_f64(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect()
}
