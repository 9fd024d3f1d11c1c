//! Independent reference implementations used only by the tests.
//!
//! Nothing here calls the library's numerics: integrals use recursive
//! adaptive Simpson or Gauss-Legendre, velocity averages integrate the Maxwell weight
//! directly, and the absorption coefficient is computed from its defining
//! integral.
#![allow(dead_code)]

use photon_transport::Complex;

pub fn rel_err(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn simpson_rec<F: Fn(f64) -> Complex>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex,
    fm: Complex,
    fb: Complex,
    whole: Complex,
    tol: f64,
    depth: u32,
) -> Complex {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction; `tol` is absolute.
pub fn adaptive_simpson<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, tol: f64) -> Complex {
    // pre-split so narrow features cannot hide between the first samples
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    let mut total = Complex::new(0.0, 0.0);
    for k in 0..pieces {
        let x0 = a + k as f64 * h;
        let x1 = if k + 1 == pieces { b } else { x0 + h };
        let fa = f(x0);
        let fb = f(x1);
        let fm = f(0.5 * (x0 + x1));
        let whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, x0, x1, fa, fm, fb, whole, tol / pieces as f64, 40);
    }
    total
}

/// 20-point Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn legendre_rule() -> ([f64; 20], [f64; 20]) {
    let n = 20;
    let mut x = [0.0; 20];
    let mut w = [0.0; 20];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn gl_panel<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, rule: &([f64; 20], [f64; 20])) -> Complex {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0.iter().zip(&rule.1).map(|(x, w)| f(c + h * x) * *w).sum::<Complex>() * h
}

fn gl_rec<F: Fn(f64) -> Complex>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex,
    tol: f64,
    depth: u32,
    rule: &([f64; 20], [f64; 20]),
) -> Complex {
    let m = 0.5 * (a + b);
    let l = gl_panel(f, a, m, rule);
    let r = gl_panel(f, m, b, rule);
    let diff = (l + r - whole).norm();
    if depth == 0 || diff <= tol || diff <= 1e-15 * (l.norm() + r.norm()) {
        return l + r;
    }
    gl_rec(f, a, m, l, 0.5 * tol, depth - 1, rule) + gl_rec(f, m, b, r, 0.5 * tol, depth - 1, rule)
}

/// Adaptive bisection with a 20-point Gauss-Legendre rule; `tol` is absolute.
pub fn adaptive_gl<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, tol: f64) -> Complex {
    let rule = legendre_rule();
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let x0 = a + k as f64 * h;
            let x1 = if k + 1 == pieces { b } else { x0 + h };
            gl_rec(f, x0, x1, gl_panel(f, x0, x1, &rule), tol / pieces as f64, 30, &rule)
        })
        .sum()
}

/// Adaptive Gauss-Legendre over several consecutive panels.
pub fn integrate_panels<F: Fn(f64) -> Complex>(f: &F, pts: &[f64], tol: f64) -> Complex {
    pts.windows(2).map(|w| adaptive_gl(f, w[0], w[1], tol)).sum()
}

/// `<h(u)>` over `u = kv0 x`, `x` Maxwell distributed.
pub fn maxwell_oracle<H: Fn(f64) -> Complex>(h: &H, kv0: f64, tol: f64) -> Complex {
    if kv0 == 0.0 {
        return h(0.0);
    }
    let f = |x: f64| h(kv0 * x) * ((-x * x).exp() / std::f64::consts::PI.sqrt());
    adaptive_gl(&f, -9.0, 9.0, tol)
}

/// Resonant unbroadened absorption `alpha0 L` such that `Re alpha(0) L = od`,
/// with coherence rate `g`.
pub fn alpha0_oracle(od: f64, delta: f64, kv0: f64, g: f64) -> f64 {
    let h = |u: f64| Complex::new(g, 0.0) / Complex::new(g, -(delta + u));
    od / maxwell_oracle(&h, kv0, 1e-15).re
}

/// `alpha(varpi) L` from the defining velocity integral.
pub fn alpha_oracle(a0l: f64, delta: f64, kv0: f64, g: f64, varpi: f64) -> Complex {
    let h = |u: f64| Complex::new(g, 0.0) / Complex::new(g, -(delta + u + varpi));
    maxwell_oracle(&h, kv0, 1e-15) * a0l
}

/// `delta alpha(varpi) L / varpi^2` without cancellation:
/// `a0l g < 1 / (c (c^2 + varpi^2)) >`, `c = g - i (delta + u)`.
pub fn delta_alpha_over_w2(a0l: f64, delta: f64, kv0: f64, g: f64, w: f64) -> Complex {
    let h = |u: f64| {
        let c = Complex::new(g, -(delta + u));
        1.0 / (c * (c * c + w * w))
    };
    // the average falls off as 1/w^2, so the absolute tolerance follows it
    maxwell_oracle(&h, kv0, 1e-15 / (1.0 + w * w)) * (a0l * g)
}

fn expm1c(z: Complex) -> Complex {
    if z.norm() < 1e-3 {
        // Taylor to 6th order
        let mut term = z;
        let mut sum = z;
        for k in 2..8 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

/// `psi_b(tau = 0)` by nested adaptive Simpson on the defining integral
/// `-(e^{-A0}/2pi) int (e^{dA} - 1)/varpi^2 dvarpi`.
pub fn psi_b_zero_oracle(od: f64, delta: f64, kv0: f64) -> Complex {
    let g = 0.5;
    let a0l = alpha0_oracle(od, delta, kv0, g);
    let a0 = alpha_oracle(a0l, delta, kv0, g, 0.0);
    let f = |w: f64| {
        let q = delta_alpha_over_w2(a0l, delta, kv0, g, w);
        let da = q * (w * w);
        if da.norm() < 1e-3 {
            let mut term = q;
            let mut sum = q;
            for k in 2..8 {
                term = term * da / k as f64;
                sum += term;
            }
            sum
        } else {
            expm1c(da) / (w * w)
        }
    };
    let s = 1.0 + kv0 + delta.abs();
    let b = 60.0 * s;
    let mut pts = vec![0.0, 0.5 * delta.abs(), delta.abs(), delta.abs() + s, 4.0 * s, b];
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let core = integrate_panels(&f, &pts, 1e-13);
    let tail = {
        let t = |u: f64| if u == 0.0 { expm1c(a0) / b } else { f(b / u) * (b / (u * u)) };
        adaptive_gl(&t, 0.0, 1.0, 1e-13)
    };
    -(-a0).exp() * (core + tail) / std::f64::consts::PI
}

/// Real Maxwell-averaged `Gamma g^2 / (|G12(w)|^2 |G12(0)|^2)` for coherence rate `g`.
pub fn velocity_factor_oracle(delta: f64, kv0: f64, g: f64, w: f64) -> f64 {
    let h = |u: f64| {
        let a = delta + u;
        Complex::new(g * g / ((g * g + (a + w) * (a + w)) * (g * g + a * a)), 0.0)
    };
    maxwell_oracle(&h, kv0, 1e-15).re
}

/// `psi_s(varpi)` for the nearly closed system with residual rate `gamma`.
pub struct PsiSOracle {
    od: f64,
    delta: f64,
    kv0: f64,
    g: f64,
    pref: f64,
    a0l: f64,
}

impl PsiSOracle {
    pub fn new(od: f64, delta: f64, kv0: f64, gamma: f64) -> Self {
        let g = 0.5 + gamma;
        PsiSOracle {
            od,
            delta,
            kv0,
            g,
            pref: 2.0 * g / (1.0 + gamma) - 1.0,
            a0l: alpha0_oracle(od, delta, kv0, 0.5),
        }
    }

    pub fn at(&self, w: f64) -> f64 {
        let a1 = alpha_oracle(self.a0l, self.delta, self.kv0, 0.5, w).re;
        let d = self.od - a1;
        let ratio = if d.abs() < 1e-12 {
            (-self.od).exp()
        } else {
            ((-a1).exp() - (-self.od).exp()) / d
        };
        self.pref * self.a0l * ratio * velocity_factor_oracle(self.delta, self.kv0, self.g, w)
    }

    /// `psi_s(tau = 0)` by adaptive Simpson over the even part.
    pub fn zero_delay(&self) -> f64 {
        let f = |w: f64| Complex::new(self.at(w) + self.at(-w), 0.0);
        let s = 1.0 + self.kv0 + self.delta.abs();
        let b = 60.0 * s;
        let d = self.delta.abs();
        let mut pts = vec![0.0, 0.5 * d, d, d + s, 4.0 * s, b];
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let core = integrate_panels(&f, &pts, 1e-13).re;
        let t = |u: f64| {
            let u = u.max(1e-9);
            f(b / u) * (b / (u * u))
        };
        let tail = adaptive_gl(&t, 0.0, 1.0, 1e-13).re;
        (core + tail) / (2.0 * std::f64::consts::PI)
    }
}

pub fn psi_s_oracle(od: f64, delta: f64, kv0: f64, gamma: f64, w: f64) -> f64 {
    PsiSOracle::new(od, delta, kv0, gamma).at(w)
}

pub fn psi_s_zero_oracle(od: f64, delta: f64, kv0: f64, gamma: f64) -> f64 {
    PsiSOracle::new(od, delta, kv0, gamma).zero_delay()
}
