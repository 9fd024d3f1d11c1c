//! Second-order correlation of the transmitted pump.
//!
//! All intensities are per unit incident flux `phi0`; the normalized
//! `g2` is computed from the flux-free parts so it does not depend on `phi0`.

use crate::error::Result;
use crate::medium::{voigt_hwhm, Grid, MediumParams};
use crate::parallel::parallel_map;
use crate::quadrature::Numerics;
use crate::spectra::{
    fourier_at, inverse_fourier_with, psi_b_spectrum, psi_b_zero_with, psi_s_spectrum,
    psi_s_zero_with, Biphoton, Spontaneous, TauFunction, TransformOptions, DEFAULT_TAIL_TOL,
};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Delay-grid and transform settings of [`g2_normalized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationOptions {
    /// The delay axis covers `[0, span_factor / hwhm]`.
    pub span_factor: f64,
    /// Minimum number of delay intervals.
    pub points: usize,
    pub tail_tol: f64,
    /// Frequency grid; `None` uses [`Grid::default_for`].
    pub grid: Option<Grid>,
    /// Incident flux used for the unnormalized parts.
    pub phi0: f64,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        CorrelationOptions {
            span_factor: 20.0,
            points: 4096,
            tail_tol: DEFAULT_TAIL_TOL,
            grid: None,
            phi0: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub tau: Vec<f64>,
    pub g2: Vec<f64>,
    /// `G2_b` in units of `phi0^2`.
    pub g2_b_part: Vec<f64>,
    /// `G2_s` in units of `phi0^2`.
    pub g2_s_part: Vec<f64>,
    /// `G1(0)` in units of `phi0`.
    pub g1_zero: f64,
    pub phi0: f64,
    pub params: MediumParams,
    /// Voigt half width used to size the delay axis.
    pub hwhm: f64,
    /// True when `g2` at the end of the delay axis is within `1e-3` of 1.
    pub tail_settled: bool,
}

impl CorrelationResult {
    /// First delay at which `|g2 - 1|` falls to half its zero-delay value,
    /// linearly interpolated.
    pub fn half_delay(&self) -> Option<f64> {
        let d0 = (self.g2[0] - 1.0).abs();
        let target = 0.5 * d0;
        for k in 1..self.g2.len() {
            let d = (self.g2[k] - 1.0).abs();
            if d <= target {
                let prev = (self.g2[k - 1] - 1.0).abs();
                let f = (prev - target) / (prev - d);
                return Some(self.tau[k - 1] + f * (self.tau[k] - self.tau[k - 1]));
            }
        }
        None
    }
}

fn coherent_field(p: &MediumParams) -> Result<Complex> {
    Ok((-Biphoton::new(p)?.alpha_zero()).exp())
}

/// `G2_b(tau) = |e^{-alpha(0) L} + beta psi_b(tau)|^2` per unit `phi0^2`.
pub fn g2_b(p: &MediumParams, psi_b: &TauFunction) -> Result<Vec<f64>> {
    let e = coherent_field(p)?;
    Ok(psi_b
        .values
        .iter()
        .map(|v| (e + p.beta * v).norm_sqr())
        .collect())
}

fn g2_s_at(p: &MediumParams, psi_s_tau: Complex, psi_s0: f64) -> f64 {
    let b = p.beta;
    let t = (-p.od).exp();
    b * b * (psi_s_tau.norm_sqr() + psi_s0 * psi_s0) + 2.0 * b * (psi_s_tau.re + psi_s0) * t
}

/// `G2_s(tau) = beta^2 (|psi_s(tau)|^2 + psi_s(0)^2) + 2 beta (Re psi_s(tau) + psi_s(0)) e^{-OD}`
/// per unit `phi0^2`.
pub fn g2_s(p: &MediumParams, psi_s: &TauFunction, psi_s0: f64) -> Vec<f64> {
    psi_s
        .values
        .iter()
        .map(|v| g2_s_at(p, *v, psi_s0))
        .collect()
}

/// `G1(0) = e^{-OD} + beta psi_s(0)` per unit `phi0`.
pub fn g1_zero(p: &MediumParams, psi_s0: f64) -> f64 {
    (-p.od).exp() + p.beta * psi_s0
}

/// Zero-delay quantities from adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroDelay {
    pub psi_b: Complex,
    pub psi_s: f64,
    pub g2: f64,
}

/// `g2(0)` with `psi_b(0)` and `psi_s(0)` from adaptive quadrature.
pub fn g2_zero(p: &MediumParams, num: &Numerics) -> Result<ZeroDelay> {
    let b = Biphoton::new(p)?;
    let psi_b = psi_b_zero_with(&b, num)?;
    let s = Spontaneous::new(p)?;
    let psi_s = psi_s_zero_with(&s, num)?;
    let e = (-b.alpha_zero()).exp();
    let num2 = (e + p.beta * psi_b).norm_sqr() + g2_s_at(p, Complex::new(psi_s, 0.0), psi_s);
    let g1 = g1_zero(p, psi_s);
    Ok(ZeroDelay {
        psi_b,
        psi_s,
        g2: num2 / (g1 * g1),
    })
}

/// `g2(tau) = (G2_b + G2_s) / G1(0)^2` on `[0, span_factor / hwhm]`.
pub fn g2_normalized(
    p: &MediumParams,
    opts: &CorrelationOptions,
    num: &Numerics,
) -> Result<CorrelationResult> {
    let hwhm = voigt_hwhm(p);
    let grid = opts.grid.unwrap_or_else(|| Grid::default_for(p));
    let topts = TransformOptions {
        tau_max: Some(opts.span_factor / hwhm),
        points: opts.points,
        tail_tol: opts.tail_tol,
    };
    let mut psi_b = inverse_fourier_with(&psi_b_spectrum(p, grid)?, &topts)?;
    let zero = g2_zero(p, num)?;
    psi_b.values[0] = zero.psi_b;
    let mut gb = g2_b(p, &psi_b)?;
    let n = gb.len();
    let gs = if zero.psi_s == 0.0 {
        vec![0.0; n]
    } else {
        let mut psi_s = inverse_fourier_with(&psi_s_spectrum(p, grid)?, &topts)?;
        psi_s.values[0] = Complex::new(zero.psi_s, 0.0);
        g2_s(p, &psi_s, zero.psi_s)
    };
    let g1 = g1_zero(p, zero.psi_s);
    let g2: Vec<f64> = gb
        .iter()
        .zip(&gs)
        .map(|(b, s)| (b + s) / (g1 * g1))
        .collect();
    let tail_settled = g2.last().is_some_and(|v| (v - 1.0).abs() < 1e-3);
    let phi2 = opts.phi0 * opts.phi0;
    for v in gb.iter_mut() {
        *v *= phi2;
    }
    Ok(CorrelationResult {
        tau: psi_b.tau,
        g2,
        g2_b_part: gb,
        g2_s_part: gs.into_iter().map(|v| v * phi2).collect(),
        g1_zero: g1 * opts.phi0,
        phi0: opts.phi0,
        params: *p,
        hwhm,
        tail_settled,
    })
}

/// `g2` at arbitrary delays by direct summation over the default grid;
/// zero delays use the quadrature values.
pub fn g2_at(p: &MediumParams, taus: &[f64], num: &Numerics) -> Result<Vec<f64>> {
    let grid = Grid::default_for(p);
    let zero = g2_zero(p, num)?;
    let e = coherent_field(p)?;
    let pb = fourier_at(&psi_b_spectrum(p, grid)?, taus, DEFAULT_TAIL_TOL)?;
    let ps = if zero.psi_s == 0.0 {
        vec![Complex::new(0.0, 0.0); taus.len()]
    } else {
        fourier_at(&psi_s_spectrum(p, grid)?, taus, DEFAULT_TAIL_TOL)?
    };
    let g1 = g1_zero(p, zero.psi_s);
    Ok(taus
        .iter()
        .zip(pb.iter().zip(&ps))
        .map(|(t, (b, s))| {
            let (b, s) = if *t == 0.0 {
                (zero.psi_b, Complex::new(zero.psi_s, 0.0))
            } else {
                (*b, *s)
            };
            ((e + p.beta * b).norm_sqr() + g2_s_at(p, s, zero.psi_s)) / (g1 * g1)
        })
        .collect())
}

/// `n` points from `lo` to `hi` inclusive; a grid symmetric about zero is
/// mirror-exact, `x[n-1-k] == -x[k]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let m = (n - 1) as f64;
            let mut x: Vec<f64> = (0..n)
                .map(|k| {
                    let (a, b) = ((n - 1 - k) as f64, k as f64);
                    (a * lo + b * hi) / m
                })
                .collect();
            x[0] = lo;
            x[n - 1] = hi;
            x
        }
    }
}

/// `g2(0)` over an optical-depth by detuning grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct G2Map {
    pub od: Vec<f64>,
    pub delta: Vec<f64>,
    /// Row-major, optical depth outer: `values[i * delta.len() + j]`.
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
}

impl G2Map {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.delta.len() + j]
    }

    /// Values with everything above `cap` replaced by `cap`, for display.
    pub fn clamped(&self, cap: f64) -> Vec<f64> {
        self.values.iter().map(|v| v.min(cap)).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    /// Cell with the smallest value, as `(od, delta, g2)`.
    pub fn minimum(&self) -> Option<(f64, f64, f64)> {
        let n = self.delta.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, v)| (self.od[k / n], self.delta[k % n], *v))
    }
}

/// `g2(0)` at every `(od, delta)` cell on `jobs` workers. Failed cells are
/// reported as NaN with `converged = false`.
pub fn g2_zero_map(
    base: &MediumParams,
    od: &[f64],
    delta: &[f64],
    num: &Numerics,
    jobs: usize,
) -> G2Map {
    let cells: Vec<(f64, f64)> = od
        .iter()
        .flat_map(|o| delta.iter().map(move |d| (*o, *d)))
        .collect();
    let out = parallel_map(&cells, jobs, |&(o, d)| {
        let p = base.with_od(o).with_delta(d);
        match g2_zero(&p, num) {
            Ok(z) if z.g2.is_finite() => (z.g2, true),
            _ => (f64::NAN, false),
        }
    });
    G2Map {
        od: od.to_vec(),
        delta: delta.to_vec(),
        values: out.iter().map(|c| c.0).collect(),
        converged: out.iter().map(|c| c.1).collect(),
    }
}
