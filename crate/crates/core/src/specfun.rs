//! Scalar special functions used by the spectral formulas.
//!
//! All rates are in units of the natural linewidth, so the complex
//! Lorentzian is `1/2 / (1/2 - i nu)`.

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

pub const SQRT_PI: f64 = 1.772_453_850_905_516;
const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;

/// Gamma(3/4).
pub const GAMMA_3_4: f64 = 1.225_416_702_465_177_6;
/// Gamma(5/4).
pub const GAMMA_5_4: f64 = 0.906_402_477_055_477_1;

/// Normalized complex Lorentzian `(1/2) / (1/2 - i nu)`.
pub fn lorentzian(nu: f64) -> Complex {
    let den = 0.25 + nu * nu;
    Complex::new(0.25 / den, 0.5 * nu / den)
}

/// `1 / (g - i x)`, the single-pole resolvent every line shape is built from.
#[inline]
pub fn resolvent(g: f64, x: f64) -> Complex {
    let den = g * g + x * x;
    Complex::new(g / den, x / den)
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-i z)` on the closed upper half plane.
pub fn faddeeva(z: Complex) -> Result<Complex> {
    check_upper(z, "faddeeva")?;
    Ok(faddeeva_upper(z))
}

fn check_upper(z: Complex, func: &'static str) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain {
            func,
            detail: format!("non-finite argument {z}"),
        });
    }
    if z.im < 0.0 {
        return Err(Error::Domain {
            func,
            detail: format!("Im z = {} < 0", z.im),
        });
    }
    Ok(())
}

/// Unchecked evaluation; caller guarantees `Im z >= 0` and finiteness.
pub(crate) fn faddeeva_upper(z: Complex) -> Complex {
    let (x, y) = (z.re.abs(), z.im);
    let w = if x.hypot(y) > 1.0e8 {
        let zz = Complex::new(x, y);
        let inv = zz.inv();
        Complex::new(0.0, 1.0 / SQRT_PI) * inv * (1.0 + 0.5 * inv * inv)
    } else {
        wofz(x, y)
    };
    if z.re < 0.0 {
        w.conj()
    } else {
        w
    }
}

// Poppe & Wijers region split: power series near the origin, Taylor
// expansion with a Laplace continued fraction in the middle band and a
// pure continued fraction far out. Expects x >= 0, y >= 0.
fn wofz(x: f64, y: f64) -> Complex {
    let xs = x / 6.3;
    let ys = y / 4.4;
    let qrho0 = xs * xs + ys * ys;
    let xquad = x * x - y * y;
    let yquad = 2.0 * x * y;

    if qrho0 < 0.085_264 {
        let qrho = (1.0 - 0.85 * ys) * qrho0.sqrt();
        let n = (6.0 + 72.0 * qrho).round() as i64;
        let mut j = 2 * n + 1;
        let mut xsum = 1.0 / j as f64;
        let mut ysum = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let fi = i as f64;
            let xaux = (xsum * xquad - ysum * yquad) / fi;
            ysum = (xsum * yquad + ysum * xquad) / fi;
            xsum = xaux + 1.0 / j as f64;
        }
        let u1 = 1.0 - TWO_OVER_SQRT_PI * (xsum * y + ysum * x);
        let v1 = TWO_OVER_SQRT_PI * (xsum * x - ysum * y);
        let daux = (-xquad).exp();
        let u2 = daux * yquad.cos();
        let v2 = -daux * yquad.sin();
        return Complex::new(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2);
    }

    let (h, kapn, nu) = if qrho0 > 1.0 {
        let nu = (3.0 + 1442.0 / (26.0 * qrho0.sqrt() + 77.0)) as i64;
        (0.0, 0, nu)
    } else {
        let qrho = (1.0 - ys) * (1.0 - qrho0).sqrt();
        (
            1.88 * qrho,
            (7.0 + 34.0 * qrho).round() as i64,
            (16.0 + 26.0 * qrho).round() as i64,
        )
    };
    let h2 = 2.0 * h;
    let taylor = h > 0.0;
    let mut qlambda = if taylor { h2.powi(kapn as i32) } else { 0.0 };
    let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for n in (0..=nu).rev() {
        let np1 = (n + 1) as f64;
        let tx = y + h + np1 * rx;
        let ty = x - np1 * ry;
        let c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if taylor && n <= kapn {
            let t = qlambda + sx;
            sx = rx * t - ry * sy;
            sy = ry * t + rx * sy;
            qlambda /= h2;
        }
    }
    let (mut u, v) = if taylor {
        (TWO_OVER_SQRT_PI * sx, TWO_OVER_SQRT_PI * sy)
    } else {
        (TWO_OVER_SQRT_PI * rx, TWO_OVER_SQRT_PI * ry)
    };
    if y == 0.0 {
        u = (-x * x).exp();
    }
    Complex::new(u, v)
}

/// `[w, w', ..., w^(n)]` at `z` in the closed upper half plane.
pub fn faddeeva_derivatives(z: Complex, n: usize) -> Result<Vec<Complex>> {
    check_upper(z, "faddeeva_derivatives")?;
    Ok(faddeeva_derivatives_upper(z, n))
}

pub(crate) fn faddeeva_derivatives_upper(z: Complex, n: usize) -> Vec<Complex> {
    if z.norm() >= 6.0 {
        return asymptotic_derivatives(z, n);
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(faddeeva_upper(z));
    if n >= 1 {
        out.push(-2.0 * z * out[0] + Complex::new(0.0, TWO_OVER_SQRT_PI));
    }
    for k in 1..n {
        let next = -2.0 * z * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

// w(z) ~ (i/sqrt(pi)) sum_k (2k-1)!!/2^k z^{-(2k+1)}, differentiated termwise.
fn asymptotic_derivatives(z: Complex, n: usize) -> Vec<Complex> {
    let inv = z.inv();
    let inv2 = inv * inv;
    let pref = Complex::new(0.0, 1.0 / SQRT_PI);
    (0..=n)
        .map(|m| {
            let mut sum = Complex::new(0.0, 0.0);
            // coefficient c_k * (-1)^m (2k+1)(2k+2)...(2k+m), power z^{-(2k+1+m)}
            let mut ck = 1.0;
            let mut zp = inv.powu(m as u32 + 1);
            let mut prev = f64::INFINITY;
            for k in 0..60usize {
                let mut poch = 1.0;
                for j in 1..=m {
                    poch *= (2 * k + j) as f64;
                }
                let term = zp * (ck * poch);
                let mag = term.norm();
                if mag > prev {
                    break;
                }
                sum += term;
                if mag <= 1e-18 * sum.norm() {
                    break;
                }
                prev = mag;
                ck *= (2 * k + 1) as f64 / 2.0;
                zp *= inv2;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            pref * sum * sign
        })
        .collect()
}

/// Modified Bessel function of the second kind, `K_{1/4}(x)` for real `x > 0`.
pub fn bessel_k_quarter(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "bessel_k_quarter",
            detail: format!("x = {x} must be positive and finite"),
        });
    }
    let (k, scaled) = k_quarter_real(x);
    Ok(if scaled { k * (-x).exp() } else { k })
}

/// `e^x K_{1/4}(x)` for real `x > 0`.
pub fn bessel_k_quarter_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "bessel_k_quarter_scaled",
            detail: format!("x = {x} must be positive and finite"),
        });
    }
    let (k, scaled) = k_quarter_real(x);
    Ok(if scaled { k } else { k * x.exp() })
}

// Temme series below x = 2, Steed's continued fraction above. Returns the
// value and whether it is already multiplied by e^x.
fn k_quarter_real(x: f64) -> (f64, bool) {
    const MU: f64 = 0.25;
    const EPS: f64 = 1.0e-16;
    if x < 2.0 {
        let gampl = 1.0 / GAMMA_5_4;
        let gammi = 1.0 / GAMMA_3_4;
        let gam1 = (gammi - gampl) / (2.0 * MU);
        let gam2 = 0.5 * (gammi + gampl);
        let x2 = 0.5 * x;
        let pimu = PI * MU;
        let fact = pimu / pimu.sin();
        let d = -x2.ln();
        let e = MU * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        for i in 1..10_000 {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - MU * MU);
            c *= dd / fi;
            p /= fi - MU;
            q /= fi + MU;
            let del = c * ff;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        (sum, false)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - MU * MU;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        ((PI / (2.0 * x)).sqrt() / s, true)
    }
}

/// `e^z K_{1/4}(z)` for complex `z` with `Re z > 0`.
///
/// Uses the trapezoid rule on `int_0^inf exp(-z (cosh t - 1)) cosh(t/4) dt`,
/// which converges geometrically for integrands analytic in a strip.
pub fn bessel_k_quarter_scaled_complex(z: Complex) -> Result<Complex> {
    if !z.re.is_finite() || !z.im.is_finite() || !(z.re > 0.0) {
        return Err(Error::Domain {
            func: "bessel_k_quarter_scaled_complex",
            detail: format!("Re z must be positive, got {z}"),
        });
    }
    let strip = 0.5 * PI - z.arg().abs();
    let h = (strip / 12.0).min(0.1);
    let mut sum = Complex::new(0.5, 0.0);
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        let decay = z * (t.cosh() - 1.0);
        let term = (-decay).exp() * (0.25 * t).cosh();
        sum += term;
        if decay.re > t + 40.0 && term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        k += 1;
        if k > 50_000_000 {
            return Err(Error::NonConvergence {
                what: "K_{1/4} trapezoid sum".into(),
                estimate: term.norm(),
                tolerance: 1e-18,
            });
        }
    }
    Ok(sum * h)
}

/// Gauss-Hermite rule for averages over the Maxwell distribution.
///
/// Nodes are velocities in units of `v0`; weights include the `1/sqrt(pi)`
/// normalization, so `sum(weights) == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl HermiteRule {
    /// `sum_i w_i f(v_i)`, summed in node order.
    pub fn average<F: Fn(f64) -> Complex>(&self, f: F) -> Complex {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(0.0, 0.0), |acc, (&x, &w)| acc + f(x) * w)
    }

    pub fn average_real<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(0.0, |acc, (&x, &w)| acc + f(x) * w)
    }
}

/// Gauss-Hermite nodes and normalized weights of the given order (>= 1).
pub fn hermite_rule(order: usize) -> HermiteRule {
    assert!(order >= 1, "hermite_rule needs order >= 1");
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let n = order;
    let m = n.div_ceil(2);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => {
                let t = (2 * n + 1) as f64;
                t.sqrt() - 1.855_75 * t.powf(-0.166_67)
            }
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let fj = j as f64;
                p1 = z * (2.0 / fj).sqrt() * p2 - ((fj - 1.0) / fj).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 3.0e-14 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    x.reverse();
    w.reverse();
    let total: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= total;
    }
    HermiteRule {
        nodes: x,
        weights: w,
        order,
    }
}

/// Complex `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex) -> Complex {
    let s = (0.5 * z.im).sin();
    Complex::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * s * s,
        z.re.exp() * z.im.sin(),
    )
}

/// Complex `(exp(z) - 1) / z`, equal to 1 at the origin.
pub fn exprel(z: Complex) -> Complex {
    if z.norm() < 1e-5 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        expm1(z) / z
    }
}
