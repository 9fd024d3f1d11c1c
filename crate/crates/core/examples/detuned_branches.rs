//! Antibunching points away from resonance, from the large-depth system and
//! from the exact zero-delay amplitude.

use photon_transport::medium::MediumParams;
use photon_transport::quadrature::Numerics;
use photon_transport::solver::{solve_detuned_branch, solve_detuned_exact};

fn main() -> photon_transport::Result<()> {
    let num = Numerics::default();
    let p = MediumParams::closed(0.0, 0.0, 1e-2, 1.0);
    for n in [1, 2] {
        let a = solve_detuned_branch(p.beta, n)?;
        let e = solve_detuned_exact(&p, n, &num)?;
        let m = a.mirrored();
        println!(
            "branch {n}: asymptotic ({:.4}, +-{:.4})  exact ({:.4}, {:.4})  mirror delta {:.4}",
            a.od_a, a.delta_a, e.od_a, e.delta_a, m.delta_a
        );
    }
    Ok(())
}
