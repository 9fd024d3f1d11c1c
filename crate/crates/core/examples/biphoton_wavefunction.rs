//! Biphoton wavefunction: spectrum, delay dependence and the low-depth limit.

use photon_transport::medium::{Grid, MediumParams};
use photon_transport::quadrature::Numerics;
use photon_transport::spectra::{
    fourier_at, inverse_fourier_with, psi_b_low_od_tau, psi_b_spectrum, psi_b_zero, TransformOptions,
};

fn main() -> photon_transport::Result<()> {
    let num = Numerics::default();
    let p = MediumParams::closed(0.0, 1.0, 1e-2, 4.0);
    let spec = psi_b_spectrum(&p, Grid::default_for(&p))?;
    let opts = TransformOptions {
        tau_max: Some(8.0),
        points: 16,
        ..Default::default()
    };
    let psi = inverse_fourier_with(&spec, &opts)?;
    println!("psi_b(0) by quadrature: {:.8}", psi_b_zero(&p, &num)?);
    println!("psi_b(0) by transform:  {:.8}", psi.values[0]);
    for (t, v) in psi.tau.iter().zip(&psi.values).step_by(8).take(8) {
        println!("tau = {t:6.3}  psi_b = {v:.6}");
    }

    let thin = p.with_od(1e-3);
    let taus = [0.25, 0.5, 1.0, 2.0];
    let exact = fourier_at(&psi_b_spectrum(&thin, Grid::default_for(&thin))?, &taus, 1e-8)?;
    println!("\nod = 1e-3, exact against low-depth form");
    for (t, e) in taus.iter().zip(exact) {
        println!("tau = {t:5.2}  {e:.6e}  {:.6e}", psi_b_low_od_tau(&thin, *t, &num)?);
    }
    Ok(())
}
