//! Weak-saturation steady state of a single atom and the diffusion matrix of
//! its Langevin forces.
//!
//! The pump is treated as a c-number with real amplitude, so
//! `g^2 <a^dag a>` becomes `beta * flux` with `g = sqrt(beta)`.

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::Complex;
use serde::{Deserialize, Serialize};

/// Saturation parameter above which the weak-saturation results are flagged.
pub const WEAK_SATURATION: f64 = 0.1;

/// Saturation parameter `S` for incident flux `flux`.
///
/// Closed system: `S = 8 beta flux`. Open system:
/// `S = 2 beta (gamma1 + gamma2 - Gamma21) / (gamma12 gamma1 gamma2) flux`,
/// which equals `(1 - s11) + s22` at resonance.
pub fn saturation(p: &MediumParams, flux: f64) -> Result<f64> {
    if !(flux >= 0.0) || !flux.is_finite() {
        return Err(Error::InvalidParams(format!("flux = {flux} must be finite and >= 0")));
    }
    let s = if p.open_rates.is_none() && p.gamma_small == 0.0 {
        8.0 * p.beta * flux
    } else {
        let r = p.rates();
        2.0 * p.beta * (1.0 / r.gamma2 + r.leak_ratio()) / r.gamma12 * flux
    };
    if s >= WEAK_SATURATION {
        log::warn!("saturation parameter S = {s} is not small");
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub s11: f64,
    pub s22: f64,
    pub s12: Complex,
    pub s21: Complex,
    pub flux: f64,
    pub saturation: f64,
}

/// Steady state for an atom with Doppler shift `kvz`, to first order in
/// the saturation parameter.
pub fn steady_state(p: &MediumParams, flux: f64, kvz: f64) -> Result<SteadyState> {
    p.validate()?;
    let s = saturation(p, flux)?;
    if s >= 1.0 {
        return Err(Error::Saturated(s));
    }
    let r = p.rates();
    let g12 = Complex::new(r.gamma12, -(p.delta + kvz));
    let g2a = p.beta * flux;
    let lor = 2.0 * r.gamma12 / g12.norm_sqr();
    let amp = (p.beta * flux).sqrt();
    let i = Complex::new(0.0, 1.0);
    Ok(SteadyState {
        s11: 1.0 - g2a * lor * r.leak_ratio(),
        s22: g2a * lor / r.gamma2,
        s12: i * amp / g12,
        s21: -i * amp / g12.conj(),
        flux,
        saturation: s,
    })
}

/// Operator index in the order `12, 21, 11, 22`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Index {
    S12,
    S21,
    S11,
    S22,
}

impl Index {
    pub const ORDER: [Index; 4] = [Index::S12, Index::S21, Index::S11, Index::S22];

    pub fn position(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Index::S12 => "12",
            Index::S21 => "21",
            Index::S11 => "11",
            Index::S22 => "22",
        }
    }
}

/// Diffusion coefficients `D(a, b)` of the Langevin forces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionMatrix {
    pub entries: [[Complex; 4]; 4],
}

impl DiffusionMatrix {
    pub fn get(&self, a: Index, b: Index) -> Complex {
        self.entries[a.position()][b.position()]
    }

    /// Positions that vanish for every state.
    pub const STRUCTURAL_ZEROS: [(Index, Index); 6] = [
        (Index::S12, Index::S12),
        (Index::S21, Index::S21),
        (Index::S21, Index::S11),
        (Index::S21, Index::S22),
        (Index::S11, Index::S12),
        (Index::S22, Index::S12),
    ];
}

/// Diffusion matrix at the steady state `s`, with the population transfer
/// rate `Gamma21` in place of the spontaneous rate.
pub fn diffusion_matrix(s: &SteadyState, p: &MediumParams) -> DiffusionMatrix {
    let r = p.rates();
    let c = |x: f64| Complex::new(x, 0.0);
    let z = c(0.0);
    let feed = r.gamma21 * s.s22 + r.gamma1 * (1.0 - s.s11);
    let out = r.gamma1 + r.gamma21;
    DiffusionMatrix {
        entries: [
            [z, c(2.0 * r.gamma12 * s.s11 + feed), -out * s.s12, r.gamma2 * s.s12],
            [c((2.0 * r.gamma12 - r.gamma2) * s.s22), z, z, z],
            [z, -out * s.s21, c(feed), c(-out * s.s22)],
            [z, r.gamma2 * s.s21, c(-out * s.s22), c(r.gamma2 * s.s22)],
        ],
    }
}
