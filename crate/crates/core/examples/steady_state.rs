//! Weak-saturation steady state of one atom and its diffusion matrix.

use photon_transport::atomic::{diffusion_matrix, saturation, steady_state, Index};
use photon_transport::medium::MediumParams;

fn main() -> photon_transport::Result<()> {
    let p = MediumParams::closed(0.0, 0.0, 0.007, 1.0).with_gamma(0.01);
    println!("S at unit flux: {:.4}", saturation(&p, 1.0)?);
    let s = steady_state(&p, 1.0, 0.3)?;
    println!("s11 = {:.6}, s22 = {:.6}, s12 = {:.6}", s.s11, s.s22, s.s12);
    let d = diffusion_matrix(&s, &p);
    print!("{:>6}", "");
    for b in Index::ORDER {
        print!("{:>24}", b.label());
    }
    println!();
    for a in Index::ORDER {
        print!("{:>6}", a.label());
        for b in Index::ORDER {
            print!("{:>24.5}", d.get(a, b));
        }
        println!();
    }
    Ok(())
}
