//! Lyapunov-functional diagnostics: V(t) = ||eps||/(t_c - t) decays
//! monotonically on a smooth instance without noise, and stays below
//! max(V(0), sqrt(Delta/gamma)) under a bounded disturbance.
//!
//! ```bash
//! cargo run --release --example lyapunov_monitor
//! ```

use znnqp::integrator::{integrate, lyapunov_series, Diagnostics, RunConfig};
use znnqp::models::{ModelKind, ModelSpec};
use znnqp::noise::{NoiseChannel, NoiseKind};
use znnqp::numkit::seeded_uniform;
use znnqp::oracle;
use znnqp::tvqp::{smooth_benchmark_problem, KktState};

fn main() -> znnqp::Result<()> {
    let problem = smooth_benchmark_problem(0.5);
    let dt = 1e-3;
    let gamma = 2.0;
    for (label, kind) in [
        ("noise-free", NoiseKind::Zero),
        (
            "0.2 cos(t)",
            NoiseKind::Sinusoid {
                amp: 0.2,
                freq: 1.0,
            },
        ),
        ("0.5 white", NoiseKind::BoundedWhite { amp: 0.5, seed: 3 }),
    ] {
        let channel = NoiseChannel {
            kind,
            dim: problem.dim(),
        };
        let spec = ModelSpec::benchmark(ModelKind::SptcAnFoznn, 0.5, channel.inf_bound());
        let t_p = spec.t_p();
        let sol = oracle::solve_at(&problem, dt)?;
        let mut y = oracle::stacked_state(&sol);
        let raw = seeded_uniform(7, y.len());
        let norm = raw.norm2();
        y.axpy(0.5 / norm, &raw);
        let cfg = RunConfig {
            dt,
            t_end: 1.02,
            model: spec,
            noise: channel.clone(),
            y0: KktState {
                y,
                t: dt,
                tau: 1e-8,
            },
            record_every: 1,
            diagnostics: Diagnostics {
                lyapunov: true,
                condition_number: false,
            },
        };
        let log = integrate(&problem, &cfg)?;
        let series = lyapunov_series(&log, 1.0, t_p, dt);
        let window: Vec<&(f64, f64)> = series
            .iter()
            .filter(|(t, _)| *t <= 1.0 - 10.0 * dt)
            .collect();
        let v0 = window.first().map(|p| p.1).unwrap_or(f64::NAN);
        let vmax = window.iter().map(|p| p.1).fold(0.0, f64::max);
        let max_up = window
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = v0.max((channel.l2_bound() / gamma).sqrt());
        println!(
            "{label:<12}: V(0) = {v0:.4}, max V = {vmax:.4}, bound = {bound:.4}, largest V up-step = {max_up:.2e}"
        );
    }
    Ok(())
}
