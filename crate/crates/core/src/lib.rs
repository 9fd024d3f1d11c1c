//! Photon statistics of a nearly monochromatic field transmitted through a
//! gas of two-level atoms, in units of the natural linewidth.
//!
//! - [`medium`]: Doppler-averaged complex absorption `alpha(varpi) L`.
//! - [`spectra`]: biphoton and spontaneous-emission wavefunctions in
//!   frequency and delay.
//! - [`correlation`]: `g2(tau)`, `g2(0)` and `(od, delta)` maps.
//! - [`solver`]: antibunching depths, detuned branches, large-depth formulas
//!   and the `g2(0)` floor of a nearly closed system.
//! - [`atomic`]: weak-saturation steady state and diffusion matrix.
//! - [`sweep`]: deterministic parallel parameter sweeps with a disk cache.
//! - [`figures`] and [`config`]: CSV figure tables and run configuration.
//! - [`selftest`]: reduced-size invariant checks.
//!
//! ```
//! use photon_transport::{medium::MediumParams, quadrature::Numerics, solver};
//!
//! let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
//! let a = solver::solve_od_a_resonant(&p, &Numerics::default()).unwrap();
//! assert!((a.od_a - 5.88).abs() < 0.02);
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod atomic;
pub mod config;
pub mod correlation;
pub mod error;
pub mod figures;
pub mod medium;
pub mod parallel;
pub mod quadrature;
pub mod selftest;
pub mod solver;
pub mod specfun;
pub mod spectra;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
