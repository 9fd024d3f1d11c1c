//! Residual `g2(0)` of a nearly closed system at the antibunching depth.

use photon_transport::medium::{MediumParams, OpenRates};
use photon_transport::quadrature::Numerics;
use photon_transport::solver::{g2_floor_asymptotic, g2_floor_open, solve_od_a_resonant};

fn main() -> photon_transport::Result<()> {
    let num = Numerics::default();
    let gamma = 0.01;
    for kv0 in [0.0, 2.0, 5.0, 10.0, 20.0] {
        let p = MediumParams::closed(0.0, kv0, 1e-2, 1.0).with_gamma(gamma);
        let od = solve_od_a_resonant(&p, &num)?.od_a;
        let f = g2_floor_open(&p.with_od(od), &num)?;
        println!("kv0 = {kv0:>4}: od_a = {od:.4}, g2(0) = {:.4} gamma", f / gamma);
    }
    let cold = MediumParams::closed(0.0, 0.0, 1e-2, 1.0).with_gamma(gamma);
    println!("large-depth limit: {}", g2_floor_asymptotic(&cold)?);

    let rates = OpenRates {
        gamma1: 0.005,
        gamma2: 1.0,
        gamma12: 0.52,
        gamma21: 0.98,
    };
    let p = cold.with_open_rates(rates);
    let od = solve_od_a_resonant(&p, &num)?.od_a;
    println!("explicit rates: od_a = {od:.4}, g2(0) = {:.5}", g2_floor_open(&p.with_od(od), &num)?);
    Ok(())
}
