//! Normalized `g2(tau)` at the antibunching depth; the relaxation time scales
//! with the inverse Voigt width.

use photon_transport::correlation::{g2_normalized, CorrelationOptions};
use photon_transport::medium::MediumParams;
use photon_transport::quadrature::Numerics;
use photon_transport::solver::solve_od_a_resonant;

fn main() -> photon_transport::Result<()> {
    let num = Numerics::default();
    for kv0 in [0.0, 1.0, 10.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 1.0);
        let p = p.with_od(solve_od_a_resonant(&p, &num)?.od_a);
        let r = g2_normalized(&p, &CorrelationOptions::default(), &num)?;
        let half = r.half_delay().unwrap_or(f64::NAN);
        println!(
            "kv0 = {kv0:>4}: od = {:.4}, g2(0) = {:.2e}, half delay x width = {:.4}",
            p.od, r.g2[0], half * r.hwhm
        );
        let step = r.tau.len() / 10;
        for k in (step..r.tau.len()).step_by(step).take(4) {
            println!("  tau = {:8.4}  g2 = {:.5}", r.tau[k], r.g2[k]);
        }
    }
    Ok(())
}
