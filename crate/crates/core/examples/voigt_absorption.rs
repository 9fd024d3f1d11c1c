//! Doppler-broadened complex absorption `alpha(varpi) L` at fixed optical depth.

use photon_transport::medium::{alpha, alpha0_from_od, voigt_hwhm, MediumParams};

fn main() -> photon_transport::Result<()> {
    for kv0 in [0.0, 1.0, 10.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 3.0);
        println!(
            "kv0 = {kv0:>4}: alpha0 L = {:.4}, half width = {:.4}",
            alpha0_from_od(&p)?,
            voigt_hwhm(&p)
        );
        for varpi in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let a = alpha(&p, varpi)?;
            println!("  varpi = {varpi:>5}: {:>9.5} {:+.5}i", a.re, a.im);
        }
    }
    Ok(())
}
