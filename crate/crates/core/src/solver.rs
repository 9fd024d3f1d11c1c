//! Antibunching conditions, large-depth asymptotics of the zero-delay
//! wavefunctions, and the open-system floor of `g2(0)`.
//!
//! Complete antibunching needs `beta psi_b(0) = -e^{-alpha(0) L}`. At
//! resonance both sides are real and the condition fixes the optical depth;
//! off resonance the phase condition selects a discrete set of branches
//! `n = 1, 2, ...` at `(od, delta)` and its mirror `(od, -delta)`.

use crate::error::{Error, Result};
use crate::medium::{alpha0_from_od, MediumParams};
use crate::quadrature::Numerics;
use crate::specfun::{bessel_k_quarter_scaled, bessel_k_quarter_scaled_complex, GAMMA_3_4};
use crate::spectra::{psi_b_zero_with, psi_s_zero_with, Biphoton, Spontaneous};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Bracket searched for the resonant antibunching depth.
pub const OD_BRACKET: (f64, f64) = (1.0, 30.0);
const OD_TOL: f64 = 1e-8;
const FD_STEP: f64 = 1e-6;
/// Cancellation residual below which an antibunching point counts as found.
pub const CANCELLATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntibunchingPoint {
    pub od_a: f64,
    pub delta_a: f64,
    /// 0 for the resonant solution.
    pub branch: u32,
    /// Residual of the defining equations at the returned point.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl AntibunchingPoint {
    /// The solution at negative detuning, which shares the optical depth.
    pub fn mirrored(&self) -> Self {
        AntibunchingPoint {
            delta_a: -self.delta_a,
            ..*self
        }
    }
}

/// `beta psi_b(0) + e^{-alpha(0) L}`, zero at complete antibunching.
pub fn cancellation(p: &MediumParams, num: &Numerics) -> Result<Complex> {
    let b = Biphoton::new(p)?;
    Ok(p.beta * psi_b_zero_with(&b, num)? + (-b.alpha_zero()).exp())
}

/// Brent's method on a bracket with a sign change. Returns the root and the
/// number of function evaluations.
pub(crate) fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, what: &str) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    let mut evals = 2;
    if fa == 0.0 {
        return Ok((a, evals));
    }
    if fb == 0.0 {
        return Ok((b, evals));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot {
            what: what.into(),
            lo: a,
            hi: b,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok((b, evals));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
        evals += 1;
    }
    Err(Error::NonConvergence {
        what: what.into(),
        estimate: (c - b).abs(),
        tolerance: xtol,
    })
}

fn require_resonant(p: &MediumParams, what: &str) -> Result<()> {
    if p.delta != 0.0 {
        return Err(Error::InvalidParams(format!(
            "{what} needs delta = 0, got {}",
            p.delta
        )));
    }
    Ok(())
}

/// Resonant antibunching depth on [`OD_BRACKET`].
pub fn solve_od_a_resonant(p: &MediumParams, num: &Numerics) -> Result<AntibunchingPoint> {
    solve_od_a_in(p, OD_BRACKET.0, OD_BRACKET.1, num)
}

/// Resonant antibunching depth, root of `beta |psi_b(0)| = e^{-OD}` in
/// `[lo, hi]`, solved in logarithmic form to `1e-8` in `od`.
pub fn solve_od_a_in(p: &MediumParams, lo: f64, hi: f64, num: &Numerics) -> Result<AntibunchingPoint> {
    require_resonant(p, "solve_od_a_resonant")?;
    p.validate()?;
    let lnb = p.beta.ln();
    let f = |od: f64| -> Result<f64> {
        let b = Biphoton::new(&p.with_od(od))?;
        Ok(lnb + psi_b_zero_with(&b, num)?.norm().ln() + od)
    };
    let (od, evals) = brent(f, lo, hi, OD_TOL, "resonant antibunching condition")?;
    let residual = cancellation(&p.with_od(od), num)?.norm();
    Ok(AntibunchingPoint {
        od_a: od,
        delta_a: 0.0,
        branch: 0,
        residual,
        converged: residual < CANCELLATION_TOL,
        iterations: evals,
    })
}

/// Parameters of the large-depth expansion with Doppler broadening.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    /// `mu = eta sqrt(alpha0 L (1 - 2 i delta) / 48)`.
    pub mu: Complex,
    /// `1 / kv0`.
    pub eta: f64,
}

/// `alpha0 L (1 - 2 i delta)`, written for a general coherence rate `g` as
/// `alpha0 L 4 g (g - i delta)`.
fn depth(p: &MediumParams) -> Result<Complex> {
    let g = p.alpha_gamma12();
    Ok(alpha0_from_od(p)? * 4.0 * g * Complex::new(g, -p.delta))
}

impl AsymptoticParams {
    pub fn new(p: &MediumParams) -> Result<Self> {
        if !(p.kv0 > 0.0) {
            return Err(Error::InvalidParams(
                "asymptotic Doppler parameters need kv0 > 0".into(),
            ));
        }
        let eta = 1.0 / p.kv0;
        Ok(AsymptoticParams {
            mu: eta * (depth(p)? / 48.0).sqrt(),
            eta,
        })
    }

    /// `alpha0 L (1 - 2 i delta)` recovered from `mu` and `eta`.
    pub fn depth(&self) -> Complex {
        48.0 * self.mu * self.mu / (self.eta * self.eta)
    }

    /// `-(eta / (sqrt(24) pi)) e^{mu^2} K_{1/4}(mu^2)`.
    pub fn bessel_form(&self) -> Result<Complex> {
        let m2 = self.mu * self.mu;
        let k = if m2.im == 0.0 {
            Complex::new(bessel_k_quarter_scaled(m2.re)?, 0.0)
        } else {
            bessel_k_quarter_scaled_complex(m2)?
        };
        Ok(-self.eta / (24f64.sqrt() * PI) * k)
    }

    /// Small-`|mu|` limit, `-sqrt(eta) / (24^{1/4} Gamma(3/4) depth^{1/4})`.
    pub fn small_mu_form(&self) -> Complex {
        -self.eta.sqrt() / (24f64.powf(0.25) * GAMMA_3_4 * self.depth().powf(0.25))
    }

    /// Limit without Doppler broadening, `-1 / sqrt(pi depth)`.
    pub fn homogeneous_form(&self) -> Complex {
        homogeneous(self.depth())
    }
}

fn homogeneous(depth: Complex) -> Complex {
    -1.0 / (PI * depth).sqrt()
}

fn warn_shallow(p: &MediumParams) {
    if p.od < 3.0 {
        log::warn!("large-depth asymptotics used at od = {}", p.od);
    }
}

/// Large-depth `psi_b(0)`: the homogeneous limit when `kv0 = 0`, the Bessel
/// form otherwise.
pub fn psi_b_zero_asymptotic(p: &MediumParams) -> Result<Complex> {
    p.validate()?;
    warn_shallow(p);
    if p.kv0 == 0.0 {
        Ok(homogeneous(depth(p)?))
    } else {
        AsymptoticParams::new(p)?.bessel_form()
    }
}

/// Large-depth `psi_b(0)` for a Doppler width much wider than `sqrt(depth)`.
pub fn psi_b_zero_small_mu(p: &MediumParams) -> Result<Complex> {
    p.validate()?;
    warn_shallow(p);
    Ok(AsymptoticParams::new(p)?.small_mu_form())
}

/// Rate feeding thermal-like emission, `2 gamma12 - gamma2`; equal to the
/// residual rate `gamma` for the closed-limit rates.
pub fn emission_rate(p: &MediumParams) -> f64 {
    match p.open_rates {
        None => p.gamma_small,
        Some(r) => 2.0 * r.gamma12 - r.gamma2,
    }
}

fn require_cold_resonant(p: &MediumParams, what: &str) -> Result<()> {
    require_resonant(p, what)?;
    if p.kv0 != 0.0 {
        return Err(Error::InvalidParams(format!(
            "{what} needs kv0 = 0, got {}",
            p.kv0
        )));
    }
    Ok(())
}

/// Large-depth `psi_s(0) = gamma / sqrt(pi alpha0 L)` for cold atoms at
/// resonance.
pub fn psi_s_zero_asymptotic(p: &MediumParams) -> Result<f64> {
    p.validate()?;
    require_cold_resonant(p, "psi_s_zero_asymptotic")?;
    warn_shallow(p);
    let rate = emission_rate(p);
    if rate == 0.0 {
        return Ok(0.0);
    }
    Ok(rate / (PI * alpha0_from_od(p)?).sqrt())
}

/// `g2(0) = 4 psi_s(0) / |psi_b(0)|` at the antibunching depth, from the
/// quadrature values. `p.od` should already be the antibunching depth.
pub fn g2_floor_open(p: &MediumParams, num: &Numerics) -> Result<f64> {
    let s = Spontaneous::new(p)?;
    if s.is_zero() {
        return Ok(0.0);
    }
    let ps = psi_s_zero_with(&s, num)?;
    let pb = psi_b_zero_with(&Biphoton::new(p)?, num)?;
    Ok(4.0 * ps / pb.norm())
}

/// Large-depth floor for cold atoms at resonance, `4 gamma`.
pub fn g2_floor_asymptotic(p: &MediumParams) -> Result<f64> {
    p.validate()?;
    require_cold_resonant(p, "g2_floor_asymptotic")?;
    Ok(4.0 * emission_rate(p))
}

/// Newton iteration with a bisection safeguard on `[lo, hi]`, derivative by
/// central differences.
fn safeguarded_newton<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64, bool, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot {
            what: "asymptotic antibunching condition".into(),
            lo,
            hi,
        });
    }
    let rising = fhi > flo;
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x)?;
    for it in 1..=100 {
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let slope = (f(x + FD_STEP)? - f(x - FD_STEP)?) / (2.0 * FD_STEP);
        let newton = x - fx / slope;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        fx = f(x)?;
        if step < tol || fx == 0.0 {
            return Ok((x, fx, true, it));
        }
    }
    Ok((x, fx, false, 100))
}

/// Antibunching depth from the large-depth `psi_b(0)`: root of
/// `beta e^{OD} = 1 / |psi_b(0)|` on [`OD_BRACKET`].
pub fn solve_od_a_asymptotic(p: &MediumParams) -> Result<AntibunchingPoint> {
    p.validate()?;
    let lnb = p.beta.ln();
    let f = |od: f64| -> Result<f64> {
        let q = p.with_od(od);
        let psi = if q.kv0 == 0.0 {
            homogeneous(depth(&q)?)
        } else {
            AsymptoticParams::new(&q)?.bessel_form()?
        };
        Ok(lnb + od + psi.norm().ln())
    };
    let (od, r, converged, iterations) = safeguarded_newton(f, OD_BRACKET.0, OD_BRACKET.1, 1e-12)?;
    Ok(AntibunchingPoint {
        od_a: od,
        delta_a: p.delta,
        branch: 0,
        residual: r.abs(),
        converged,
        iterations,
    })
}

/// Two-dimensional Newton iteration with central-difference Jacobian and
/// step halving on the residual norm.
fn newton2<F>(mut f: F, start: [f64; 2], tol: f64, max_iter: usize) -> Result<([f64; 2], f64, bool, usize)>
where
    F: FnMut([f64; 2]) -> Result<[f64; 2]>,
{
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let mut x = start;
    let mut r = f(x)?;
    for it in 1..=max_iter {
        if norm(r) < tol {
            return Ok((x, norm(r), true, it - 1));
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let (mut xp, mut xm) = (x, x);
            xp[k] += FD_STEP;
            xm[k] -= FD_STEP;
            let (rp, rm) = (f(xp)?, f(xm)?);
            for i in 0..2 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * FD_STEP);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Ok((x, norm(r), false, it));
        }
        let dx = [
            (r[0] * jac[1][1] - r[1] * jac[0][1]) / det,
            (r[1] * jac[0][0] - r[0] * jac[1][0]) / det,
        ];
        let mut lambda = 1.0;
        loop {
            let trial = [x[0] - lambda * dx[0], x[1] - lambda * dx[1]];
            let rt = if trial[0] > 0.0 { f(trial).ok() } else { None };
            match rt {
                Some(rt) if norm(rt) < norm(r) || lambda < 1e-3 => {
                    x = trial;
                    r = rt;
                    break;
                }
                _ if lambda < 1e-3 => return Ok((x, norm(r), false, it)),
                _ => lambda *= 0.5,
            }
        }
    }
    let res = norm(r);
    Ok((x, res, res < tol, max_iter))
}

/// Detuned antibunching branch `n >= 1` of the cold-atom large-depth system
///
/// `beta e^{OD} = sqrt(pi OD) (1 + 4 delta^2)^{3/4}`,
/// `2 delta OD = 2 pi n - atan(2 delta / (1 + sqrt(1 + 4 delta^2)))`,
///
/// seeded at `OD = ` [`solve_od_a_asymptotic`], `delta = pi n / OD`. The
/// residual is the norm of the first equation in logarithmic form and the
/// second as written; the returned point has `delta > 0`.
pub fn solve_detuned_branch(beta: f64, n: u32) -> Result<AntibunchingPoint> {
    if n == 0 {
        return Err(Error::InvalidParams("detuned branches start at n = 1".into()));
    }
    let base = MediumParams::closed(0.0, 0.0, beta, 1.0);
    base.validate()?;
    let seed = solve_od_a_asymptotic(&base)?.od_a;
    let (lnb, target) = (beta.ln(), 2.0 * PI * n as f64);
    let f = |x: [f64; 2]| -> Result<[f64; 2]> {
        let (od, d) = (x[0], x[1]);
        let s = 1.0 + 4.0 * d * d;
        let a = 2.0 * d / (1.0 + s.sqrt());
        Ok([
            lnb + od - 0.5 * (PI * od).ln() - 0.75 * s.ln(),
            2.0 * d * od - target + a.atan(),
        ])
    };
    let (x, residual, converged, iterations) = newton2(f, [seed, PI * n as f64 / seed], 1e-12, 100)?;
    Ok(AntibunchingPoint {
        od_a: x[0],
        delta_a: x[1],
        branch: n,
        residual,
        converged: converged && residual < 1e-10,
        iterations,
    })
}

/// Detuned branch `n` of the exact condition `beta psi_b(0) = -e^{-alpha(0) L}`
/// for the medium `p` (its `od` and `delta` are ignored), seeded with the
/// cold-atom large-depth branch.
pub fn solve_detuned_exact(p: &MediumParams, n: u32, num: &Numerics) -> Result<AntibunchingPoint> {
    let seed = solve_detuned_branch(p.beta, n)?;
    let f = |x: [f64; 2]| -> Result<[f64; 2]> {
        let q = p.with_od(x[0]).with_delta(x[1]);
        let b = Biphoton::new(&q)?;
        let g = q.beta * psi_b_zero_with(&b, num)? * b.alpha_zero().exp() + 1.0;
        Ok([g.re, g.im])
    };
    let (x, _, _, iterations) = newton2(f, [seed.od_a, seed.delta_a], 1e-10, 60)?;
    let residual = cancellation(&p.with_od(x[0]).with_delta(x[1]), num)?.norm();
    Ok(AntibunchingPoint {
        od_a: x[0],
        delta_a: x[1],
        branch: n,
        residual,
        converged: residual < CANCELLATION_TOL,
        iterations,
    })
}
