//! Cached parallel sweep of the antibunching depth over beta and kv0.

use photon_transport::correlation::linspace;
use photon_transport::medium::MediumParams;
use photon_transport::sweep::{run_sweep_cached, Axis, AxisName, Cache, Quantity, SweepSpec};

fn main() -> photon_transport::Result<()> {
    let spec = SweepSpec::new(
        MediumParams::default(),
        vec![
            Axis {
                name: AxisName::Beta,
                values: vec![1e-2, 1e-3],
            },
            Axis {
                name: AxisName::Kv0,
                values: linspace(0.0, 20.0, 5),
            },
        ],
        Quantity::OdA,
    );
    let cache = Cache::new(std::env::temp_dir().join("photon-transport-example"));
    let (r, hit) = run_sweep_cached(&spec, 0, Some(&cache))?;
    println!("spec {} ({} cells, cache hit: {hit})", &r.spec_hash[..16], r.cells.len());
    for c in &r.cells {
        println!("beta = {:<6} kv0 = {:>4}: od_a = {:.5}", c.params.beta, c.params.kv0, c.values[0]);
    }
    let (_, hit) = run_sweep_cached(&spec, 0, Some(&cache))?;
    println!("second run served from cache: {hit}");
    Ok(())
}
