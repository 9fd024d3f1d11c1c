//! Optical depth at which the coherent and biphoton amplitudes cancel.

use photon_transport::medium::MediumParams;
use photon_transport::quadrature::Numerics;
use photon_transport::solver::{cancellation, solve_od_a_asymptotic, solve_od_a_resonant};

fn main() -> photon_transport::Result<()> {
    let num = Numerics::default();
    println!("{:>7} {:>5} {:>10} {:>10}", "beta", "kv0", "exact", "asymptotic");
    for beta in [1e-2, 1e-3, 1e-4] {
        for kv0 in [0.0, 1.0, 10.0] {
            let p = MediumParams::closed(0.0, kv0, beta, 1.0);
            let exact = solve_od_a_resonant(&p, &num)?;
            let approx = solve_od_a_asymptotic(&p)?;
            println!("{beta:>7} {kv0:>5} {:>10.5} {:>10.5}", exact.od_a, approx.od_a);
        }
    }
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let a = solve_od_a_resonant(&p, &num)?;
    println!("residual amplitude at od_a: {:.2e}", cancellation(&p.with_od(a.od_a), &num)?.norm());
    Ok(())
}
