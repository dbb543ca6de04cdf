//! Closed-loop kinematic control: the predefined-time anti-noise model
//! resolves joint velocities for a five-petal curve under a combined
//! cos(t) + bounded-white disturbance.
//!
//! ```bash
//! cargo run --release --example robot_tracking [heart|lissajous|plum]
//! ```

use znnqp::models::{ModelKind, ModelSpec, SlidingPolicy};
use znnqp::noise::{NoiseChannel, NoiseKind};
use znnqp::robot::{track, ArmModel, TrajKind, TrajectorySpec, ARM_DOF};

fn main() -> znnqp::Result<()> {
    let kind = std::env::args()
        .nth(1)
        .and_then(|s| TrajKind::from_name(&s))
        .unwrap_or(TrajKind::Plum);
    let arm = ArmModel::default_7dof();
    let traj = TrajectorySpec::new(kind, 10.0);
    let dim = ARM_DOF + 3 + 2 * ARM_DOF;
    let noise = NoiseChannel {
        kind: NoiseKind::Composite(vec![
            NoiseKind::Sinusoid {
                amp: 1.0,
                freq: 1.0,
            },
            NoiseKind::BoundedWhite { amp: 1.0, seed: 5 },
        ]),
        dim,
    };
    let mut spec = ModelSpec::benchmark(ModelKind::SptcAnFoznn, 0.5, noise.inf_bound());
    spec.t_c = 0.01;
    spec.sliding = SlidingPolicy::Explicit;

    println!(
        "tracking the {} curve for {} s ...",
        kind.name(),
        traj.period
    );
    let log = track(&arm, &traj, &spec, &noise, 1e-3, 1e-8, 1)?;
    let me = log.max_axis_error();
    let ae = log.mean_axis_error();
    println!(
        "max per-axis error  [m]: ({:.2e}, {:.2e}, {:.2e})",
        me[0], me[1], me[2]
    );
    println!(
        "mean per-axis error [m]: ({:.2e}, {:.2e}, {:.2e})",
        ae[0], ae[1], ae[2]
    );
    println!(
        "joint-angle violations: {}, velocity violations: {}",
        log.angle_violations, log.velocity_violations
    );
    println!("return-to-start gap [rad]: {:.2e}", log.return_gap);
    let qd_peak = log.qd.iter().map(|qd| qd.norm_inf()).fold(0.0, f64::max);
    println!("peak |qd| [rad/s]: {qd_peak:.3} (bound 0.65)");
    Ok(())
}
