//! Ground truth by active-set enumeration: samples the exact KKT point of
//! the benchmark QP along a grid and reports where the active set changes.
//!
//! ```bash
//! cargo run --release --example oracle_path
//! ```

use znnqp::oracle;
use znnqp::tvqp::benchmark_problem;

fn main() -> znnqp::Result<()> {
    let problem = benchmark_problem();
    for &t in &[0.0, 0.5, 1.0, 2.0] {
        let sol = oracle::solve_at(&problem, t)?;
        println!(
            "t = {t:.2}: x* = ({:+.6}, {:+.6}), objective = {:+.6}, active mask = {:04b}",
            sol.x_star[0], sol.x_star[1], sol.objective, sol.active_set
        );
    }
    let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
    let path = oracle::solution_path(&problem, &grid)?;
    let xmax = path
        .solutions
        .iter()
        .map(|s| s.x_star.norm_inf())
        .fold(0.0, f64::max);
    println!(
        "\n{} grid points on [0, 3]; max |x*| = {xmax:.6}",
        path.solutions.len()
    );
    println!("active-set switches at: {:?}", path.switch_times);
    Ok(())
}
