//! Medium parameters and the Doppler-averaged complex absorption coefficient.
//!
//! Every rate is in units of the natural linewidth. The absorption
//! coefficient is reported already multiplied by the medium length, so
//! `alpha(p, 0).re == p.od`.

use crate::error::{Error, Result};
use crate::specfun::{self, SQRT_PI};
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Relaxation rates of an open two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpenRates {
    /// Ground-state exchange rate.
    pub gamma1: f64,
    /// Total decay rate of the upper state.
    pub gamma2: f64,
    /// Coherence decay rate.
    pub gamma12: f64,
    /// Population transfer rate from the upper to the lower state.
    pub gamma21: f64,
}

impl OpenRates {
    /// Rates of the nearly closed system with residual rate `gamma`.
    pub fn closed_limit(gamma: f64) -> Self {
        OpenRates {
            gamma1: gamma,
            gamma2: 1.0 + gamma,
            gamma12: 0.5 + gamma,
            gamma21: 1.0,
        }
    }

    /// `2 gamma12 / gamma2 - 1`, the weight of thermal-like emission.
    pub fn thermal_weight(&self) -> f64 {
        2.0 * self.gamma12 / self.gamma2 - 1.0
    }

    pub fn is_ideal_closed(&self) -> bool {
        2.0 * self.gamma12 == self.gamma2
    }

    /// `(1 - gamma21/gamma2) / gamma1`, continued to `1/gamma2` where both
    /// numerator and denominator vanish.
    pub(crate) fn leak_ratio(&self) -> f64 {
        let num = self.gamma2 - self.gamma21;
        if self.gamma1 == 0.0 && num == 0.0 {
            1.0 / self.gamma2
        } else {
            num / (self.gamma2 * self.gamma1)
        }
    }

    fn validate(&self) -> Result<()> {
        let r = self;
        let all = [r.gamma1, r.gamma2, r.gamma12, r.gamma21];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParams(format!(
                "open rates must be finite and non-negative: {r:?}"
            )));
        }
        if r.gamma2 <= 0.0 || r.gamma12 <= 0.0 {
            return Err(Error::InvalidParams(
                "gamma2 and gamma12 must be positive".into(),
            ));
        }
        let slack = 1e-12 * r.gamma12.max(1.0);
        if r.gamma12 + slack < 0.5 * (r.gamma1 + r.gamma2) {
            return Err(Error::InvalidParams(format!(
                "gamma12 = {} is below (gamma1 + gamma2)/2 = {}",
                r.gamma12,
                0.5 * (r.gamma1 + r.gamma2)
            )));
        }
        if r.gamma21 > r.gamma2 {
            return Err(Error::InvalidParams(format!(
                "gamma21 = {} exceeds gamma2 = {}",
                r.gamma21, r.gamma2
            )));
        }
        if r.gamma1 == 0.0 && r.gamma2 != r.gamma21 {
            return Err(Error::InvalidParams(
                "gamma1 = 0 requires gamma21 = gamma2 (no loss channel without repumping)".into(),
            ));
        }
        Ok(())
    }
}

/// Which coherence decay rate enters the absorption coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaModel {
    /// Closed-system Voigt profile with coherence rate 1/2.
    #[default]
    ClosedLimit,
    /// Coherence rate taken from the (open or synthesized) system rates.
    Rates,
}

/// Physical parameters of the pumped gas, in units of the natural linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Pump detuning.
    pub delta: f64,
    /// Doppler width `k v0`.
    pub kv0: f64,
    /// Fraction of spontaneous emission captured by the guided mode.
    pub beta: f64,
    /// Resonant optical depth `Re alpha(0) L`.
    pub od: f64,
    /// Residual relaxation rate of the nearly closed system.
    pub gamma_small: f64,
    /// Explicit open-system rates; synthesized from `gamma_small` if absent.
    pub open_rates: Option<OpenRates>,
    pub alpha_model: AlphaModel,
}

impl Default for MediumParams {
    fn default() -> Self {
        MediumParams {
            delta: 0.0,
            kv0: 0.0,
            beta: 1e-2,
            od: 1.0,
            gamma_small: 0.0,
            open_rates: None,
            alpha_model: AlphaModel::ClosedLimit,
        }
    }
}

impl MediumParams {
    pub fn closed(delta: f64, kv0: f64, beta: f64, od: f64) -> Self {
        MediumParams {
            delta,
            kv0,
            beta,
            od,
            ..Default::default()
        }
    }

    pub fn with_od(mut self, od: f64) -> Self {
        self.od = od;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_kv0(mut self, kv0: f64) -> Self {
        self.kv0 = kv0;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma_small = gamma;
        self
    }

    pub fn with_open_rates(mut self, rates: OpenRates) -> Self {
        self.open_rates = Some(rates);
        self
    }

    pub fn with_alpha_model(mut self, model: AlphaModel) -> Self {
        self.alpha_model = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.delta, self.kv0, self.beta, self.od, self.gamma_small];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter in {self:?}")));
        }
        if self.kv0 < 0.0 {
            return Err(Error::InvalidParams(format!("kv0 = {} < 0", self.kv0)));
        }
        if self.od < 0.0 {
            return Err(Error::InvalidParams(format!("od = {} < 0", self.od)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParams(format!(
                "beta = {} outside (0, 1)",
                self.beta
            )));
        }
        if self.gamma_small < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma = {} < 0",
                self.gamma_small
            )));
        }
        if let Some(r) = &self.open_rates {
            r.validate()?;
        }
        Ok(())
    }

    /// System rates: explicit open rates or the closed-limit substitution.
    pub fn rates(&self) -> OpenRates {
        self.open_rates
            .unwrap_or_else(|| OpenRates::closed_limit(self.gamma_small))
    }

    /// Coherence decay rate used in the absorption coefficient.
    pub fn alpha_gamma12(&self) -> f64 {
        match self.alpha_model {
            AlphaModel::ClosedLimit => 0.5,
            AlphaModel::Rates => self.rates().gamma12,
        }
    }
}

/// Doppler widths below this fraction of the homogeneous width are treated
/// as zero; the Faddeeva argument would otherwise leave the double range.
const DOPPLER_FLOOR: f64 = 1e-6;

fn effective_kv0(g: f64, kv0: f64) -> f64 {
    if kv0 < DOPPLER_FLOOR * g {
        0.0
    } else {
        kv0
    }
}

/// Maxwell average `< 1 / (g - i (d + k v)) >`.
pub fn voigt_kernel(g: f64, kv0: f64, d: f64) -> Complex {
    let kv0 = effective_kv0(g, kv0);
    if kv0 == 0.0 {
        specfun::resolvent(g, d)
    } else {
        let z = Complex::new(d / kv0, g / kv0);
        specfun::faddeeva_upper(z) * (SQRT_PI / kv0)
    }
}

/// Derivatives `[V, V', ..., V^(n)]` of [`voigt_kernel`] with respect to `d`.
pub fn voigt_kernel_derivatives(g: f64, kv0: f64, d: f64, n: usize) -> Vec<Complex> {
    let kv0 = effective_kv0(g, kv0);
    if kv0 == 0.0 {
        let r = specfun::resolvent(g, d);
        let mut out = Vec::with_capacity(n + 1);
        let mut term = r;
        let i = Complex::new(0.0, 1.0);
        for k in 0..=n {
            out.push(term);
            term = term * r * i * (k as f64 + 1.0);
        }
        out
    } else {
        let z = Complex::new(d / kv0, g / kv0);
        let w = specfun::faddeeva_derivatives_upper(z, n);
        let mut scale = SQRT_PI / kv0;
        w.into_iter()
            .map(|wk| {
                let v = wk * scale;
                scale /= kv0;
                v
            })
            .collect()
    }
}

/// Complex absorption `alpha(varpi) L` with the resonant scale resolved.
#[derive(Debug, Clone, Copy)]
pub struct Absorber {
    /// `alpha_0 L`, the unbroadened resonant absorption.
    pub alpha0_l: f64,
    pub g: f64,
    pub kv0: f64,
    pub delta: f64,
}

impl Absorber {
    pub fn new(p: &MediumParams) -> Result<Self> {
        p.validate()?;
        let g = p.alpha_gamma12();
        let a = Absorber {
            alpha0_l: 1.0,
            g,
            kv0: effective_kv0(g, p.kv0),
            delta: p.delta,
        };
        if p.od == 0.0 {
            return Ok(Absorber { alpha0_l: 0.0, ..a });
        }
        let factor = a.at(0.0).re;
        if !(factor.is_finite() && factor > 1e-280) {
            return Err(Error::NonConvergence {
                what: format!(
                    "alpha0 from od: Doppler/detuning reduction factor {factor:e} underflows"
                ),
                estimate: factor,
                tolerance: 1e-280,
            });
        }
        Ok(Absorber {
            alpha0_l: p.od / factor,
            ..a
        })
    }

    /// `alpha(varpi) L`.
    pub fn at(&self, varpi: f64) -> Complex {
        voigt_kernel(self.g, self.kv0, self.delta + varpi) * (self.alpha0_l * self.g)
    }

    /// `[alpha, alpha', ..., alpha^(n)] L` at `varpi`.
    pub fn derivatives(&self, varpi: f64, n: usize) -> Vec<Complex> {
        let s = self.alpha0_l * self.g;
        voigt_kernel_derivatives(self.g, self.kv0, self.delta + varpi, n)
            .into_iter()
            .map(|v| v * s)
            .collect()
    }

    /// Width over which `alpha` varies appreciably near `varpi = 0`.
    pub fn scale(&self) -> f64 {
        self.g.hypot(self.delta).max(0.5 * self.kv0)
    }
}

/// `alpha(varpi) L` for the given parameters.
pub fn alpha(p: &MediumParams, varpi: f64) -> Result<Complex> {
    Ok(Absorber::new(p)?.at(varpi))
}

/// `alpha_0 L` such that `Re alpha(0) L == od`.
pub fn alpha0_from_od(p: &MediumParams) -> Result<f64> {
    Ok(Absorber::new(p)?.alpha0_l)
}

/// `alpha(varpi) L` by an explicit Gauss-Hermite velocity average.
pub fn alpha_hermite(p: &MediumParams, varpi: f64, order: usize) -> Result<Complex> {
    let a = Absorber::new(p)?;
    let rule = specfun::hermite_rule(order);
    let v = rule.average(|x| specfun::resolvent(a.g, a.delta + varpi + a.kv0 * x));
    Ok(v * (a.alpha0_l * a.g))
}

/// Half width at half maximum of `Re alpha` on resonance.
pub fn voigt_hwhm(p: &MediumParams) -> f64 {
    let g = p.alpha_gamma12();
    let kv0 = effective_kv0(g, p.kv0);
    let prof = |w: f64| voigt_kernel(g, kv0, w).re;
    let half = 0.5 * prof(0.0);
    let (mut lo, mut hi) = (0.0, 4.0 * (kv0 + 1.0));
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if prof(mid) > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Uniform grid `varpi_j = (j - n/2) * step`, `j = 0..n`, symmetric about
/// zero apart from the unpaired left edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub step: f64,
}

impl Grid {
    /// `n` (even) nodes covering `[-span/2, span/2)`.
    pub fn symmetric(span: f64, n: usize) -> Self {
        assert!(n >= 4 && n % 2 == 0, "grid size must be even and >= 4");
        Grid {
            n,
            step: span / n as f64,
        }
    }

    /// Default grid: span `max(96, 48 kv0 + 16) + 8|delta|` with at least
    /// `2^14` nodes and a step no larger than `0.04`.
    pub fn default_for(p: &MediumParams) -> Self {
        let span = (48.0 * p.kv0 + 16.0).max(96.0) + 8.0 * p.delta.abs();
        let mut n = 1usize << 14;
        while span / n as f64 > 0.04 {
            n *= 2;
        }
        Grid::symmetric(span, n)
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of `varpi = 0`.
    pub fn zero_index(&self) -> usize {
        self.n / 2
    }
}

/// Sampled `alpha(varpi) L`.
#[derive(Debug, Clone)]
pub struct AbsorptionProfile {
    pub alpha0_l: f64,
    pub grid: Grid,
    pub values: Vec<Complex>,
}

pub fn absorption_profile(p: &MediumParams, grid: Grid) -> Result<AbsorptionProfile> {
    let a = Absorber::new(p)?;
    Ok(AbsorptionProfile {
        alpha0_l: a.alpha0_l,
        grid,
        values: (0..grid.n).map(|j| a.at(grid.node(j))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_unbroadened() {
        let p = MediumParams::closed(0.0, 0.0, 0.01, 1.0);
        assert_eq!(alpha(&p, 0.0).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(alpha0_from_od(&p.with_od(3.0)).unwrap(), 3.0);
        let a = alpha0_from_od(&MediumParams::closed(1.0, 0.0, 0.01, 1.0)).unwrap();
        assert!((a - 5.0).abs() < 1e-14);
    }

    #[test]
    fn kernel_derivatives_match_differences() {
        for &(kv0, d) in &[(0.0, 0.3), (1.0, 0.2), (10.0, -3.0), (1e-3, 0.1)] {
            let v = voigt_kernel_derivatives(0.5, kv0, d, 2);
            let h = 1e-4;
            let fd = (voigt_kernel(0.5, kv0, d + h) - voigt_kernel(0.5, kv0, d - h)) / (2.0 * h);
            assert!((v[1] - fd).norm() < 1e-6 * v[1].norm().max(1e-3), "kv0={kv0}");
            let fd2 = (voigt_kernel(0.5, kv0, d + h) - 2.0 * v[0] + voigt_kernel(0.5, kv0, d - h)) / (h * h);
            assert!((v[2] - fd2).norm() < 1e-4 * v[2].norm().max(1e-2), "kv0={kv0}");
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(MediumParams::closed(0.0, -1.0, 0.01, 1.0).validate().is_err());
        assert!(MediumParams::closed(0.0, 0.0, 1.0, 1.0).validate().is_err());
        let bad = OpenRates {
            gamma1: 0.1,
            gamma2: 1.0,
            gamma12: 0.4,
            gamma21: 1.0,
        };
        assert!(MediumParams::default().with_open_rates(bad).validate().is_err());
    }

    #[test]
    fn grid_layout() {
        let g = Grid::symmetric(40.0, 16);
        assert_eq!(g.node(g.zero_index()), 0.0);
        assert_eq!(g.node(1), -g.node(15));
    }
}
