//! The shipped 7-DOF arm: forward kinematics, the position Jacobian against
//! finite differences, and the velocity bounds tapering near joint limits.
//!
//! ```bash
//! cargo run --example kinematics
//! ```

use znnqp::numkit::Vector;
use znnqp::robot::{fk, jacobian, smooth_bounds, ArmModel};

fn main() {
    let arm = ArmModel::default_7dof();
    let home = fk(&arm, &Vector::zeros(7));
    println!(
        "home position: ({:.3}, {:.3}, {:.3})",
        home[0], home[1], home[2]
    );
    let ready = fk(&arm, &arm.q0);
    println!(
        "ready position: ({:.3}, {:.3}, {:.3})",
        ready[0], ready[1], ready[2]
    );

    let q = arm.q0.clone();
    let j = jacobian(&arm, &q);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for col in 0..7 {
        let mut qp = q.clone();
        qp[col] += h;
        let fd = fk(&arm, &qp).sub(&fk(&arm, &q)).scale(1.0 / h);
        for row in 0..3 {
            worst = worst.max((fd[row] - j[(row, col)]).abs());
        }
    }
    println!("jacobian vs finite differences: worst entry error {worst:.2e}");

    println!(
        "\nvelocity-bound taper on joint 1 (limit {:.3} rad):",
        arm.q_max[0]
    );
    println!("{:>10} {:>10} {:>10}", "q1 [rad]", "d-", "d+");
    for frac in [0.0, 0.5, 0.88, 0.92, 0.96, 1.0] {
        let mut probe = Vector::zeros(7);
        probe[0] = frac * arm.q_max[0];
        let (dm, dp) = smooth_bounds(&arm, &probe);
        println!("{:>10.3} {:>10.4} {:>10.4}", probe[0], dm[0], dp[0]);
    }
}
