//! The perturbed Fischer-Burmeister function: its zero set approximates the
//! complementarity set as the perturbation shrinks, which is what turns the
//! inequality KKT rows into a smooth equation.
//!
//! ```bash
//! cargo run --example fb_smoothing
//! ```

use znnqp::numkit::Vector;
use znnqp::tvqp::fb_perturbed;

fn main() -> znnqp::Result<()> {
    println!("psi(u, v) on a grid, tau = 1e-12 (zeros exactly on {{u>=0, v>=0, uv=0}}):");
    print!("{:>6}", "u\\v");
    let grid = [0.0, 0.5, 1.0, 1.5, 2.0];
    for v in grid {
        print!("{v:>10}");
    }
    println!();
    for u in grid {
        print!("{u:>6}");
        for v in grid {
            let psi = fb_perturbed(&Vector::from_slice(&[u]), &Vector::from_slice(&[v]), 1e-12)?[0];
            print!("{psi:>10.2e}");
        }
        println!();
    }

    println!("\nbias of the smoothing at an exactly-complementary corner (u = v = 0):");
    for tau in [1e-6, 1e-8, 1e-10, 1e-12] {
        let psi = fb_perturbed(&Vector::zeros(1), &Vector::zeros(1), tau)?[0];
        println!("  tau = {tau:.0e}: psi = {psi:+.3e} (= -sqrt(tau))");
    }
    Ok(())
}
