//! Coarse `g2(0)` map over optical depth and detuning, printed as text.

use photon_transport::correlation::{g2_zero_map, linspace};
use photon_transport::medium::MediumParams;
use photon_transport::quadrature::Numerics;

fn main() {
    let od = linspace(0.0, 10.0, 21);
    let delta = linspace(-1.5, 1.5, 41);
    let base = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    let map = g2_zero_map(&base, &od, &delta, &Numerics::default(), 0);
    let shade = |g: f64| match g {
        g if g < 0.1 => '#',
        g if g < 0.5 => '+',
        g if g < 1.0 => '.',
        g if g < 2.0 => ' ',
        _ => '^',
    };
    for i in (0..od.len()).rev() {
        let row: String = (0..delta.len()).map(|j| shade(map.at(i, j))).collect();
        println!("{:5.1} |{row}|", od[i]);
    }
    if let Some((o, d, g)) = map.minimum() {
        println!("smallest g2(0) = {g:.2e} at od = {o:.2}, delta = {d:.3}");
    }
}
