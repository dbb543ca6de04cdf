//! Disturbance rejection: the anti-noise predefined-time model against the
//! nonlinear-term baseline under a low-frequency and a bounded white
//! disturbance, same seed for both models.
//!
//! ```bash
//! cargo run --release --example noisy_convergence
//! ```

use znnqp::integrator::{integrate, Diagnostics, RunConfig};
use znnqp::models::{ModelKind, ModelSpec};
use znnqp::noise::{NoiseChannel, NoiseKind};
use znnqp::oracle;
use znnqp::tvqp::{benchmark_problem, KktState};

fn main() -> znnqp::Result<()> {
    let problem = benchmark_problem();
    let dt = 1e-3;
    let scenarios = [
        (
            "0.2 cos(t)",
            NoiseKind::Sinusoid {
                amp: 0.2,
                freq: 1.0,
            },
        ),
        ("0.5 white", NoiseKind::BoundedWhite { amp: 0.5, seed: 11 }),
    ];
    println!(
        "{:<12} {:<16} {:>12} {:>12} {:>12}",
        "noise", "model", "res(t_c)", "median[1,3]", "max[1,3]"
    );
    for (label, kind) in scenarios {
        let channel = NoiseChannel {
            kind: kind.clone(),
            dim: problem.dim(),
        };
        for (model, alpha) in [(ModelKind::SptcAnFoznn, 0.5), (ModelKind::SptcNtZnn, 1.0)] {
            let sol = oracle::solve_at(&problem, dt)?;
            let cfg = RunConfig {
                dt,
                t_end: 3.0,
                model: ModelSpec::benchmark(model, alpha, channel.inf_bound()),
                noise: channel.clone(),
                y0: KktState {
                    y: oracle::stacked_state(&sol),
                    t: dt,
                    tau: 1e-8,
                },
                record_every: 1,
                diagnostics: Diagnostics::default(),
            };
            let log = integrate(&problem, &cfg)?;
            println!(
                "{:<12} {:<16} {:>12.3e} {:>12.3e} {:>12.3e}",
                label,
                model.name(),
                log.residual_at(1.0),
                log.residual_median_on(1.0, 3.0),
                log.residual_max_on(1.0, 3.0),
            );
        }
    }
    Ok(())
}
