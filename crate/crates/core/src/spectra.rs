//! Biphoton and spontaneous-emission wavefunctions in frequency and delay.
//!
//! The delay-domain convention is `psi(tau) = (1/2pi) int e^{-i w tau} psi(w) dw`.

use crate::error::{Error, Result};
use crate::medium::{voigt_kernel, voigt_kernel_derivatives, Absorber, Grid, MediumParams};
use crate::quadrature::{self, Numerics};
use crate::specfun::{exprel, hermite_rule, HermiteRule};
use crate::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below `TAYLOR_FRACTION * scale` the removable singularities at `w = 0`
/// are evaluated from Taylor coefficients of `alpha`.
const TAYLOR_FRACTION: f64 = 0.003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    PsiB,
    PsiS,
    Alpha,
    Custom,
}

/// Complex function sampled on a uniform detuning grid.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub grid: Grid,
    pub values: Vec<Complex>,
    pub kind: SpectrumKind,
}

impl ComplexSpectrum {
    pub fn from_fn<F: Fn(f64) -> Complex + Sync>(grid: Grid, kind: SpectrumKind, f: F) -> Self {
        let values = (0..grid.n)
            .into_par_iter()
            .map(|j| f(grid.node(j)))
            .collect();
        ComplexSpectrum { grid, values, kind }
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluator of the closed-system biphoton wavefunction
/// `psi_b(w) = -[exp(-(A(w) + A(-w))/2) - exp(-A(0))] / w^2`, `A = alpha L`.
#[derive(Debug, Clone)]
pub struct Biphoton {
    pub absorber: Absorber,
    a0: Complex,
    a2: Complex,
    a4: Complex,
    small: f64,
}

impl Biphoton {
    pub fn new(p: &MediumParams) -> Result<Self> {
        let absorber = Absorber::new(p)?;
        let d = absorber.derivatives(0.0, 4);
        Ok(Biphoton {
            absorber,
            a0: d[0],
            a2: d[2],
            a4: d[4],
            small: TAYLOR_FRACTION * absorber.scale(),
        })
    }

    /// `alpha(0) L`.
    pub fn alpha_zero(&self) -> Complex {
        self.a0
    }

    /// `(delta alpha(w) L, delta alpha(w) L / w^2)`.
    fn delta_parts(&self, w: f64) -> (Complex, Complex) {
        if w.abs() < self.small {
            let q = -(self.a2 * 0.5 + self.a4 * (w * w / 24.0));
            (q * (w * w), q)
        } else {
            let da = self.a0 - (self.absorber.at(w) + self.absorber.at(-w)) * 0.5;
            (da, da / (w * w))
        }
    }

    /// `delta alpha(w) L = A(0) - (A(w) + A(-w))/2`.
    pub fn delta_alpha(&self, w: f64) -> Complex {
        self.delta_parts(w).0
    }

    /// `psi_b(w)`, finite at `w = 0`.
    pub fn at(&self, w: f64) -> Complex {
        let (da, q) = self.delta_parts(w);
        -(-self.a0).exp() * exprel(da) * q
    }

    /// `alpha_0 L exp(-A(0)) (e^{dA} - 1)/dA`, the propagation factor shared
    /// by the dynamical and Langevin parts.
    fn zeta_factor(&self, w: f64) -> Complex {
        let (da, _) = self.delta_parts(w);
        (-self.a0).exp() * exprel(da) * self.absorber.alpha0_l
    }
}

/// `psi_b(w)` on a grid (closed or nearly closed system).
pub fn psi_b_spectrum(p: &MediumParams, grid: Grid) -> Result<ComplexSpectrum> {
    let b = Biphoton::new(p)?;
    Ok(ComplexSpectrum::from_fn(grid, SpectrumKind::PsiB, |w| b.at(w)))
}

// (1/2pi) int_{-inf}^{inf} f over panels adapted to the line shape.
fn line_integral<F: Fn(f64) -> Complex>(
    f: F,
    width: f64,
    delta: f64,
    num: &Numerics,
    what: &str,
) -> Result<Complex> {
    let d = delta.abs();
    let s = width;
    let mut pts = vec![0.0, d + s, d + 4.0 * s];
    if d > 0.0 {
        pts.push(d);
        pts.push(0.5 * d);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let b = d + 16.0 * s;
    pts.push(b);
    let even = |w: f64| f(w) + f(-w);
    let core = quadrature::integrate_points(&even, &pts, num, what)?;
    let tail = quadrature::integrate_to_infinity(&even, b, num, what)?;
    Ok((core.value + tail.value) / (2.0 * PI))
}

/// Biphoton wavefunction at zero delay, `(1/2pi) int psi_b(w) dw`.
pub fn psi_b_zero(p: &MediumParams, num: &Numerics) -> Result<Complex> {
    let b = Biphoton::new(p)?;
    psi_b_zero_with(&b, num)
}

pub(crate) fn psi_b_zero_with(b: &Biphoton, num: &Numerics) -> Result<Complex> {
    let a = &b.absorber;
    line_integral(|w| b.at(w), a.g.max(a.kv0), a.delta, num, "psi_b(0)")
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain {
            func: "psi_b_low_od_tau",
            detail: format!("tau = {tau} must be finite and non-negative"),
        });
    }
    Ok(())
}

/// Velocity average choosing Hermite, direct or adaptive evaluation.
pub(crate) struct VelocityAverager {
    kv0: f64,
    rule: Option<HermiteRule>,
    num: Numerics,
}

impl VelocityAverager {
    pub(crate) fn new(kv0: f64, g: f64, num: &Numerics) -> Self {
        let rule = (kv0 > 0.0 && kv0 <= 0.5 * g).then(|| hermite_rule(num.hermite_order));
        VelocityAverager {
            kv0,
            rule,
            num: *num,
        }
    }

    pub(crate) fn average<F: Fn(f64) -> Complex>(
        &self,
        f: F,
        poles: &[f64],
        what: &str,
    ) -> Result<Complex> {
        if self.kv0 == 0.0 {
            return Ok(f(0.0));
        }
        if let Some(rule) = &self.rule {
            return Ok(rule.average(|x| f(self.kv0 * x)));
        }
        quadrature::maxwell_average(f, self.kv0, poles, &self.num, what)
    }
}

/// Low optical depth biphoton wavefunction
/// `psi_0(tau) = -alpha_0 L < g e^{-(g - i D) tau} / (2 (g - i D)^2) >`, `D = delta + k v`.
pub fn psi_b_low_od_tau(p: &MediumParams, tau: f64, num: &Numerics) -> Result<Complex> {
    check_tau(tau)?;
    let a = Absorber::new(p)?;
    let g = a.g;
    let avg = VelocityAverager::new(a.kv0, g, num);
    let v = avg.average(
        |u| {
            let c = Complex::new(g, -(a.delta + u));
            (-c * tau).exp() / (c * c)
        },
        &[-a.delta],
        "psi_0(tau) velocity average",
    )?;
    Ok(-v * (0.5 * g * a.alpha0_l))
}

/// Dynamical and Langevin parts of `psi_b(w)` for the general open system.
pub fn psi_b_decomposed(
    p: &MediumParams,
    grid: Grid,
    num: &Numerics,
) -> Result<(ComplexSpectrum, ComplexSpectrum)> {
    let d = Decomposition::new(p, num)?;
    let parts: Vec<Result<(Complex, Complex)>> = (0..grid.n)
        .into_par_iter()
        .map(|j| d.at(grid.node(j)))
        .collect();
    let mut dy = Vec::with_capacity(grid.n);
    let mut la = Vec::with_capacity(grid.n);
    for r in parts {
        let (a, b) = r?;
        dy.push(a);
        la.push(b);
    }
    Ok((
        ComplexSpectrum {
            grid,
            values: dy,
            kind: SpectrumKind::PsiB,
        },
        ComplexSpectrum {
            grid,
            values: la,
            kind: SpectrumKind::PsiB,
        },
    ))
}

/// Pointwise evaluator behind [`psi_b_decomposed`].
pub struct Decomposition {
    bi: Biphoton,
    g12: f64,
    g1: f64,
    g2: f64,
    g21: f64,
    delta: f64,
    avg: VelocityAverager,
}

impl Decomposition {
    pub fn new(p: &MediumParams, num: &Numerics) -> Result<Self> {
        let bi = Biphoton::new(p)?;
        let r = p.rates();
        let kv0 = bi.absorber.kv0;
        Ok(Decomposition {
            g12: r.gamma12,
            g1: r.gamma1,
            g2: r.gamma2,
            g21: r.gamma21,
            delta: p.delta,
            avg: VelocityAverager::new(kv0, r.gamma12, num),
            bi,
        })
    }

    /// `(psi_b^(d)(w), psi_b^(L)(w))`.
    pub fn at(&self, w: f64) -> Result<(Complex, Complex)> {
        let z = self.bi.zeta_factor(w);
        if z == Complex::new(0.0, 0.0) {
            return Ok((z, z));
        }
        let (g12, g1, g2, g21) = (self.g12, self.g1, self.g2, self.g21);
        let big_g1 = Complex::new(g1, -w);
        let big_g2 = Complex::new(g2, -w);
        // 1/G0 = 1/G2 + (G2 - G21)/(G1 G2); the ratio tends to 1 for a closed system
        let ratio = if g1 == 0.0 && g2 == g21 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(g2 - g21, -w) / big_g1
        };
        let inv_g0 = (1.0 + ratio) / big_g2;
        let loss = g1 + g21 - g2;
        let poles = [-self.delta, -self.delta - w, -self.delta + w];

        let dynamic = self.avg.average(
            |u| {
                let a = self.delta + u;
                let g12w = Complex::new(g12, -(a + w));
                let g120 = Complex::new(g12, -a);
                let g21w = Complex::new(g12, a - w);
                (g21w + g120) * inv_g0 * g12 / (2.0 * g120 * g12w * g21w)
            },
            &poles,
            "dynamical part velocity average",
        )?;
        let langevin = self.avg.average(
            |u| {
                let a = self.delta + u;
                let g12w = Complex::new(g12, -(a + w));
                let g12m = Complex::new(g12, -(a - w));
                let g120 = Complex::new(g12, -a);
                let g21w = Complex::new(g12, a - w);
                let mut bracket = inv_g0 * (2.0 * g12 / g21w + g2 / g120);
                if loss != 0.0 {
                    bracket += loss / (big_g1 * g120);
                }
                bracket * g12 / (2.0 * g12m * g12w)
            },
            &poles,
            "Langevin part velocity average",
        )?;
        Ok((z * dynamic, -z * langevin))
    }
}

/// Evaluator of the spontaneous-emission wavefunction `psi_s(w)`.
#[derive(Debug, Clone)]
pub struct Spontaneous {
    pub absorber: Absorber,
    prefactor: f64,
    od: f64,
    g: f64,
    kv0: f64,
    delta: f64,
    v0: Complex,
    dv: [Complex; 5],
    small: f64,
}

impl Spontaneous {
    pub fn new(p: &MediumParams) -> Result<Self> {
        let absorber = Absorber::new(p)?;
        let r = p.rates();
        let g = r.gamma12;
        let kv0 = absorber.kv0;
        let d = voigt_kernel_derivatives(g, kv0, p.delta, 4);
        let scale = g.hypot(p.delta).max(0.5 * kv0);
        Ok(Spontaneous {
            prefactor: r.thermal_weight() * absorber.alpha0_l * (-absorber.at(0.0).re).exp(),
            od: absorber.at(0.0).re,
            absorber,
            g,
            kv0,
            delta: p.delta,
            v0: d[0],
            dv: [d[0], d[1], d[2], d[3], d[4]],
            small: TAYLOR_FRACTION * scale,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor == 0.0
    }

    /// Maxwell average of `g^2 / (|G12(w)|^2 |G12(0)|^2)`.
    pub fn velocity_factor(&self, w: f64) -> f64 {
        let vw = if w.abs() < self.small {
            None
        } else {
            Some(voigt_kernel(self.g, self.kv0, self.delta + w))
        };
        // (V(D + w) - V(D)) / w
        let slope = match vw {
            Some(v) => (v - self.v0) / w,
            None => {
                let d = &self.dv;
                d[1] + w * (d[2] * 0.5 + w * (d[3] / 6.0 + w * d[4] / 24.0))
            }
        };
        let v = vw.unwrap_or_else(|| {
            let d = &self.dv;
            d[0] + w * slope
        });
        let i = Complex::new(0.0, 1.0);
        let cross = (v + self.v0.conj()) / Complex::new(2.0 * self.g, -w);
        0.5 * (slope / i + cross).re
    }

    /// `psi_s(w)` (real).
    pub fn at(&self, w: f64) -> f64 {
        if self.prefactor == 0.0 {
            return 0.0;
        }
        let d = self.od - self.absorber.at(w).re;
        let ex = if d == 0.0 { 1.0 } else { d.exp_m1() / d };
        self.prefactor * ex * self.velocity_factor(w)
    }
}

/// `psi_s(w)` on a grid; identically zero for an ideally closed system.
pub fn psi_s_spectrum(p: &MediumParams, grid: Grid) -> Result<ComplexSpectrum> {
    let s = Spontaneous::new(p)?;
    Ok(ComplexSpectrum::from_fn(grid, SpectrumKind::PsiS, |w| {
        Complex::new(s.at(w), 0.0)
    }))
}

/// Spontaneous-emission wavefunction at zero delay.
pub fn psi_s_zero(p: &MediumParams, num: &Numerics) -> Result<f64> {
    let s = Spontaneous::new(p)?;
    psi_s_zero_with(&s, num)
}

pub(crate) fn psi_s_zero_with(s: &Spontaneous, num: &Numerics) -> Result<f64> {
    if s.is_zero() {
        return Ok(0.0);
    }
    let width = s.g.max(s.absorber.g).max(s.kv0);
    let v = line_integral(
        |w| Complex::new(s.at(w), 0.0),
        width,
        s.delta,
        num,
        "psi_s(0)",
    )?;
    Ok(v.re)
}

/// Function of delay on a uniform grid starting at `tau = 0`.
#[derive(Debug, Clone)]
pub struct TauFunction {
    pub tau: Vec<f64>,
    pub values: Vec<Complex>,
    /// Grid of the spectrum the function was transformed from.
    pub source: Grid,
    /// True when the last sample exceeds `1e-6` of the peak.
    pub too_short: bool,
}

impl TauFunction {
    pub fn step(&self) -> f64 {
        if self.tau.len() > 1 {
            self.tau[1] - self.tau[0]
        } else {
            0.0
        }
    }
}

/// Default tail tolerance of the transforms.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

/// Options of [`inverse_fourier_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    /// Largest delay wanted; `None` keeps the native range `[0, pi/step)`.
    pub tau_max: Option<f64>,
    /// Minimum number of delay intervals across `[0, tau_max]`.
    pub points: usize,
    /// Largest residual, relative to the peak, allowed in the outer quarter
    /// of the grid after the analytic tail model is removed.
    pub tail_tol: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            tau_max: None,
            points: 0,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

// Half width at half maximum of |spec| around its peak.
fn half_width(spec: &ComplexSpectrum) -> f64 {
    let v = &spec.values;
    let (top, peak) = v
        .iter()
        .enumerate()
        .map(|(j, x)| (j, x.norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if peak == 0.0 {
        return 0.0;
    }
    let lo = (0..top).rev().find(|&j| v[j].norm() < 0.5 * peak).unwrap_or(0);
    let hi = (top..v.len()).find(|&j| v[j].norm() < 0.5 * peak).unwrap_or(v.len() - 1);
    0.5 * (hi - lo) as f64 * spec.grid.step
}

// Analytic model of the slowly decaying wings in powers of p = 1/(w^2 + a^2),
// even part sum c_k p^k, odd part w sum d_k p^k, k = 1..3.
#[derive(Debug, Clone, Copy)]
struct TailModel {
    a: f64,
    c: [Complex; 3],
    d: [Complex; 3],
}

// Solves sum_k m[i][k] x_k = r_i by Cramer's rule.
fn solve3(m: [[f64; 3]; 3], r: [Complex; 3]) -> Option<[Complex; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [Complex::new(0.0, 0.0); 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let (mut re, mut im) = (m, m);
        for i in 0..3 {
            re[i][k] = r[i].re;
            im[i][k] = r[i].im;
        }
        *xk = Complex::new(det(re), det(im)) / d;
    }
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

impl TailModel {
    fn fit(spec: &ComplexSpectrum) -> Self {
        let g = spec.grid;
        let n = g.n;
        let zero = [Complex::new(0.0, 0.0); 3];
        let mid = n / 2;
        let ks = [n / 2 - 1, 3 * n / 8, n / 4];
        let w2 = g.node(mid + n / 4);
        let a = half_width(spec).clamp(2.0 * g.step, 0.25 * w2);
        let mut m = [[0.0; 3]; 3];
        let mut even = zero;
        let mut odd = zero;
        for (i, &k) in ks.iter().enumerate() {
            let w = g.node(mid + k);
            let p = 1.0 / (w * w + a * a);
            m[i] = [p, p * p, p * p * p];
            let (vp, vm) = (spec.values[mid + k], spec.values[mid - k]);
            even[i] = (vp + vm) * 0.5;
            odd[i] = (vp - vm) * (0.5 / w);
        }
        TailModel {
            a,
            c: solve3(m, even).unwrap_or(zero),
            d: solve3(m, odd).unwrap_or(zero),
        }
    }

    fn value(&self, w: f64) -> Complex {
        let p = 1.0 / (w * w + self.a * self.a);
        let (c, d) = (&self.c, &self.d);
        (c[0] + (c[1] + c[2] * p) * p) * p + (d[0] + (d[1] + d[2] * p) * p) * (p * w)
    }

    // (1/2pi) int e^{-i w tau} value(w) dw; the odd transforms are i d/dtau of the even ones
    fn transform(&self, tau: f64) -> Complex {
        let a = self.a;
        let t = tau.abs();
        let e = (-a * t).exp();
        let i = Complex::new(0.0, 1.0);
        let sgn = if tau > 0.0 {
            1.0
        } else if tau < 0.0 {
            -1.0
        } else {
            0.0
        };
        let a3 = a * a * a;
        let even = [
            e / (2.0 * a),
            e * (1.0 + a * t) / (4.0 * a3),
            e * (3.0 + 3.0 * a * t + a * a * t * t) / (16.0 * a3 * a * a),
        ];
        let odd = [
            -0.5 * sgn * e,
            -tau * e / (4.0 * a),
            -tau * e * (1.0 + a * t) / (16.0 * a3),
        ];
        (0..3)
            .map(|k| self.c[k] * even[k] + self.d[k] * i * odd[k])
            .sum()
    }
}

fn residual(spec: &ComplexSpectrum, tail_tol: f64) -> Result<(TailModel, Vec<Complex>)> {
    let model = TailModel::fit(spec);
    let g = spec.grid;
    let r: Vec<Complex> = spec
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| *v - model.value(g.node(j)))
        .collect();
    let peak = spec.peak();
    if peak > 0.0 {
        let edge = 0.75 * g.node(g.n - 1);
        let worst = r
            .iter()
            .enumerate()
            .filter(|(j, _)| g.node(*j).abs() >= edge)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        if worst > tail_tol * peak {
            return Err(Error::GridTooCoarse(format!(
                "residual wing {:.3e} of the peak exceeds {:.1e}; widen the grid",
                worst / peak,
                tail_tol
            )));
        }
    }
    Ok((model, r))
}

/// `psi(tau)` on the native FFT delay grid `tau_k = 2 pi k / span`.
pub fn inverse_fourier(spec: &ComplexSpectrum) -> Result<TauFunction> {
    inverse_fourier_with(spec, &TransformOptions::default())
}

/// `psi(tau)` for `tau` in `[0, tau_max]`, zero padding the spectrum until
/// the delay step is at most `tau_max / points`.
pub fn inverse_fourier_with(spec: &ComplexSpectrum, opts: &TransformOptions) -> Result<TauFunction> {
    let g = spec.grid;
    let n = g.n;
    let (model, r) = residual(spec, opts.tail_tol)?;
    let native_step = 2.0 * PI / (n as f64 * g.step);
    let (pad, count) = match opts.tau_max {
        None => (1usize, n / 2),
        Some(tmax) => {
            let want = if opts.points > 0 {
                tmax / opts.points as f64
            } else {
                native_step
            };
            let mut pad = 1usize;
            while native_step / pad as f64 > want * (1.0 + 1e-12) {
                pad *= 2;
            }
            let step = native_step / pad as f64;
            let count = ((tmax / step).ceil() as usize + 1).min(n * pad / 2);
            (pad, count)
        }
    };
    let m = n * pad;
    let mut buf: Vec<Complex> = Vec::with_capacity(m);
    buf.extend_from_slice(&r);
    buf.resize(m, Complex::new(0.0, 0.0));
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    fft.process(&mut buf);
    let step = native_step / pad as f64;
    let scale = g.step / (2.0 * PI);
    let period = 2 * pad;
    let mut tau = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    for (k, x) in buf.iter().take(count).enumerate() {
        let t = k as f64 * step;
        // e^{i pi N k / M} with M = N pad
        let ph = PI * (k % period) as f64 / pad as f64;
        let v = x * Complex::from_polar(scale, ph) + model.transform(t);
        tau.push(t);
        values.push(v);
    }
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let too_short = values.last().map_or(false, |v| v.norm() > 1e-6 * peak);
    Ok(TauFunction {
        tau,
        values,
        source: g,
        too_short,
    })
}

/// `psi(tau)` at arbitrary delays by direct summation over the grid.
pub fn fourier_at(spec: &ComplexSpectrum, taus: &[f64], tail_tol: f64) -> Result<Vec<Complex>> {
    let g = spec.grid;
    let (model, r) = residual(spec, tail_tol)?;
    let scale = g.step / (2.0 * PI);
    Ok(taus
        .par_iter()
        .map(|&t| {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, v) in r.iter().enumerate() {
                acc += v * Complex::from_polar(1.0, -g.node(j) * t);
            }
            acc * scale + model.transform(t)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_transform() {
        let grid = Grid::symmetric(200.0, 1 << 15);
        let spec = ComplexSpectrum::from_fn(grid, SpectrumKind::Custom, crate::specfun::lorentzian);
        let taus = [0.3, 1.0, 4.0, 10.0];
        let v = fourier_at(&spec, &taus, 1e-8).unwrap();
        for (t, x) in taus.iter().zip(&v) {
            let exact = 0.5 * (-0.5 * t).exp();
            assert!((x - exact).norm() < 1e-6, "tau={t}: {x} vs {exact}");
        }
        let tf = inverse_fourier(&spec).unwrap();
        for (t, x) in tf.tau.iter().zip(&tf.values).skip(1).take(50) {
            let exact = 0.5 * (-0.5 * t).exp();
            assert!((x - exact).norm() < 1e-6, "tau={t}: {x} vs {exact}");
        }
    }

    #[test]
    fn zero_spectrum() {
        let grid = Grid::symmetric(40.0, 256);
        let spec = ComplexSpectrum::from_fn(grid, SpectrumKind::Custom, |_| Complex::new(0.0, 0.0));
        let tf = inverse_fourier(&spec).unwrap();
        assert!(tf.values.iter().all(|v| *v == Complex::new(0.0, 0.0)));
    }
}
