//! The strict predefined-time property: for several prescribed t_c the
//! residual first drops below 1e-3 close to, and never after, t_c —
//! independent of the initial offset.
//!
//! ```bash
//! cargo run --release --example predefined_time
//! ```

use znnqp::integrator::{integrate, Diagnostics, RunConfig};
use znnqp::models::{ModelKind, ModelSpec};
use znnqp::noise::NoiseChannel;
use znnqp::numkit::seeded_uniform;
use znnqp::oracle;
use znnqp::tvqp::{benchmark_problem, KktState};

fn main() -> znnqp::Result<()> {
    let problem = benchmark_problem();
    let dt = 1e-3;
    println!(
        "{:>6} {:>8} {:>14} {:>12}",
        "t_c", "radius", "first <1e-3", "fraction"
    );
    for &t_c in &[0.5, 1.0, 2.0] {
        for &radius in &[0.25, 0.5, 1.0] {
            let sol = oracle::solve_at(&problem, dt)?;
            let mut y = oracle::stacked_state(&sol);
            let raw = seeded_uniform(7, y.len());
            let norm = raw.norm2();
            y.axpy(radius / norm, &raw);
            let mut spec = ModelSpec::benchmark(ModelKind::SptcAnFoznn, 0.5, 0.0);
            spec.t_c = t_c;
            let cfg = RunConfig {
                dt,
                t_end: t_c + 0.05,
                model: spec,
                noise: NoiseChannel::zero(problem.dim()),
                y0: KktState {
                    y,
                    t: dt,
                    tau: 1e-8,
                },
                record_every: 1,
                diagnostics: Diagnostics::default(),
            };
            let log = integrate(&problem, &cfg)?;
            let crossing = log
                .times
                .iter()
                .zip(&log.residual_norms)
                .find(|(_, r)| **r < 1e-3)
                .map(|(t, _)| *t)
                .unwrap_or(f64::NAN);
            println!(
                "{t_c:>6} {radius:>8} {crossing:>14.3} {:>12.3}",
                crossing / t_c
            );
        }
    }
    Ok(())
}
