//! Serial-manipulator kinematics and the velocity-level kinematic-control
//! QP: joint velocities are resolved from the end-effector velocity through
//! a box-constrained QP whose data is refreshed every control step, and the
//! selected neural model integrates the stacked primal-dual state.

use crate::error::{Error, Result};
use crate::models::{rhs, EulerCtx, ModelSpec};
use crate::noise::NoiseChannel;
use crate::numkit::{Mat, Vector};
use crate::oracle;
use crate::tvqp::{assemble_blocks_from, residual_from, KktState, ProblemData, TimeVariantQP};
use serde::Deserialize;

pub const ARM_DOF: usize = 7;

/// Fixed transform (translation + roll-pitch-yaw) ahead of a revolute
/// joint about the local Z axis.
#[derive(Clone, Copy, Debug, Deserialize)]
pub struct JointFrame {
    pub xyz: [f64; 3],
    pub rpy: [f64; 3],
}

/// Seven-revolute-joint arm: per-joint frames, a tool frame, joint and
/// velocity limits, and the repetitive-motion settings.
#[derive(Clone, Debug)]
pub struct ArmModel {
    pub joints: Vec<JointFrame>,
    pub tool: JointFrame,
    pub q_min: Vector,
    pub q_max: Vector,
    pub qd_min: f64,
    pub qd_max: f64,
    pub iota: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub q0: Vector,
}

#[derive(Deserialize)]
struct ArmFile {
    schema: u32,
    limits: ArmLimits,
    motion: ArmMotion,
    joints: Vec<JointFrame>,
    tool: JointFrame,
}

#[derive(Deserialize)]
struct ArmLimits {
    q_min_deg: Vec<f64>,
    q_max_deg: Vec<f64>,
    qd_min: f64,
    qd_max: f64,
}

#[derive(Deserialize)]
struct ArmMotion {
    iota: f64,
    kappa1: f64,
    kappa2: f64,
    q0: Vec<f64>,
}

impl ArmModel {
    pub fn from_file(path: &std::path::Path) -> Result<ArmModel> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read arm file {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<ArmModel> {
        let file: ArmFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("arm file: {e}")))?;
        if file.schema != 1 {
            return Err(Error::Config(format!(
                "unsupported arm schema {}",
                file.schema
            )));
        }
        if file.joints.len() != ARM_DOF {
            return Err(Error::Config(format!(
                "expected {ARM_DOF} joints, got {}",
                file.joints.len()
            )));
        }
        for (name, v) in [
            ("q_min_deg", &file.limits.q_min_deg),
            ("q_max_deg", &file.limits.q_max_deg),
            ("q0", &file.motion.q0),
        ] {
            if v.len() != ARM_DOF {
                return Err(Error::Config(format!("{name} must have {ARM_DOF} entries")));
            }
        }
        let deg = std::f64::consts::PI / 180.0;
        let arm = ArmModel {
            joints: file.joints,
            tool: file.tool,
            q_min: Vector::from_vec(file.limits.q_min_deg.iter().map(|v| v * deg).collect()),
            q_max: Vector::from_vec(file.limits.q_max_deg.iter().map(|v| v * deg).collect()),
            qd_min: file.limits.qd_min,
            qd_max: file.limits.qd_max,
            iota: file.motion.iota,
            kappa1: file.motion.kappa1,
            kappa2: file.motion.kappa2,
            q0: Vector::from_vec(file.motion.q0),
        };
        arm.validate()?;
        Ok(arm)
    }

    /// The shipped default: a Panda-class 7-DOF geometry assembled from
    /// public sources, with the joint-angle box and +-0.65 rad/s velocity
    /// bounds used by every tracking preset.
    pub fn default_7dof() -> ArmModel {
        ArmModel::from_toml(DEFAULT_ARM_TOML).expect("builtin arm table parses")
    }

    fn validate(&self) -> Result<()> {
        for i in 0..ARM_DOF {
            if !(self.q_min[i] < self.q_max[i]) {
                return Err(Error::Config(format!(
                    "joint {i}: q_min must be below q_max"
                )));
            }
            if !(self.q0[i] >= self.q_min[i] && self.q0[i] <= self.q_max[i]) {
                return Err(Error::Config(format!(
                    "joint {i}: q0 outside [q_min, q_max]"
                )));
            }
        }
        if !(self.qd_min < 0.0 && self.qd_max > 0.0) {
            return Err(Error::Config("velocity bounds must straddle zero".into()));
        }
        if !(self.kappa1 > 0.0 && self.kappa1 < 1.0 && self.kappa2 > 0.0 && self.kappa2 < 1.0) {
            return Err(Error::Config("kappa1, kappa2 must lie in (0, 1)".into()));
        }
        if !(self.iota >= 0.0) {
            return Err(Error::Config("iota must be nonnegative".into()));
        }
        Ok(())
    }
}

pub const DEFAULT_ARM_TOML: &str = include_str!("../data/arm7.toml");

fn rpy_matrix(r: f64, p: f64, y: f64) -> [[f64; 3]; 3] {
    let (sr, cr) = r.sin_cos();
    let (sp, cp) = p.sin_cos();
    let (sy, cy) = y.sin_cos();
    // Rz(y) * Ry(p) * Rx(r)
    [
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ]
}

#[derive(Clone, Copy)]
struct Pose {
    rot: [[f64; 3]; 3],
    pos: [f64; 3],
}

impl Pose {
    fn identity() -> Pose {
        Pose {
            rot: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            pos: [0.0; 3],
        }
    }

    fn mul(&self, other: &Pose) -> Pose {
        let mut rot = [[0.0; 3]; 3];
        let mut pos = self.pos;
        for (i, row) in rot.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.rot[i][k] * other.rot[k][j]).sum();
            }
            pos[i] += (0..3).map(|k| self.rot[i][k] * other.pos[k]).sum::<f64>();
        }
        Pose { rot, pos }
    }

    fn frame(f: &JointFrame) -> Pose {
        Pose {
            rot: rpy_matrix(f.rpy[0], f.rpy[1], f.rpy[2]),
            pos: f.xyz,
        }
    }

    fn rot_z(q: f64) -> Pose {
        let (s, c) = q.sin_cos();
        Pose {
            rot: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
            pos: [0.0; 3],
        }
    }

    fn z_axis(&self) -> [f64; 3] {
        [self.rot[0][2], self.rot[1][2], self.rot[2][2]]
    }
}

fn chain(arm: &ArmModel, q: &Vector) -> (Vec<[f64; 3]>, Vec<[f64; 3]>, [f64; 3]) {
    let mut pose = Pose::identity();
    let mut origins = Vec::with_capacity(ARM_DOF);
    let mut axes = Vec::with_capacity(ARM_DOF);
    for (i, frame) in arm.joints.iter().enumerate() {
        pose = pose.mul(&Pose::frame(frame));
        origins.push(pose.pos);
        axes.push(pose.z_axis());
        pose = pose.mul(&Pose::rot_z(q[i]));
    }
    pose = pose.mul(&Pose::frame(&arm.tool));
    (origins, axes, pose.pos)
}

/// End-effector Cartesian position.
pub fn fk(arm: &ArmModel, q: &Vector) -> Vector {
    let (_, _, p) = chain(arm, q);
    Vector::from_slice(&p)
}

/// Position Jacobian (3 x 7), cross-product form over the revolute axes.
pub fn jacobian(arm: &ArmModel, q: &Vector) -> Mat {
    let (origins, axes, pe) = chain(arm, q);
    let mut j = Mat::zeros(3, ARM_DOF);
    for i in 0..ARM_DOF {
        let r = [
            pe[0] - origins[i][0],
            pe[1] - origins[i][1],
            pe[2] - origins[i][2],
        ];
        let z = axes[i];
        j[(0, i)] = z[1] * r[2] - z[2] * r[1];
        j[(1, i)] = z[2] * r[0] - z[0] * r[2];
        j[(2, i)] = z[0] * r[1] - z[1] * r[0];
    }
    j
}

/// Velocity bounds tapered to zero at the joint-angle limits by a nested
/// sine-squared ramp. Inside the plateau the raw bounds pass through.
pub fn smooth_bounds(arm: &ArmModel, q: &Vector) -> (Vector, Vector) {
    let mut d_minus = Vector::zeros(ARM_DOF);
    let mut d_plus = Vector::zeros(ARM_DOF);
    let half_pi = 0.5 * std::f64::consts::PI;
    for i in 0..ARM_DOF {
        let qi = q[i].clamp(arm.q_min[i], arm.q_max[i]);
        let xi1 = arm.kappa1 * arm.q_min[i];
        let xi2 = arm.kappa2 * arm.q_max[i];
        let xi3 = arm.q_min[i] - xi1;
        let xi4 = arm.q_max[i] - xi2;
        d_minus[i] = if qi >= xi1 {
            arm.qd_min
        } else {
            let inner = (half_pi * (qi - xi1) / xi3).sin();
            let ramp = (half_pi * inner * inner).sin().powi(2);
            arm.qd_min * (1.0 - ramp)
        };
        d_plus[i] = if qi <= xi2 {
            arm.qd_max
        } else {
            let inner = (half_pi * (qi - xi2) / xi4).sin();
            let ramp = (half_pi * inner * inner).sin().powi(2);
            arm.qd_max * (1.0 - ramp)
        };
    }
    (d_minus, d_plus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajKind {
    Heart,
    Lissajous,
    Plum,
}

impl TrajKind {
    pub fn name(&self) -> &'static str {
        match self {
            TrajKind::Heart => "heart",
            TrajKind::Lissajous => "lissajous",
            TrajKind::Plum => "plum",
        }
    }

    pub fn from_name(name: &str) -> Option<TrajKind> {
        Some(match name {
            "heart" => TrajKind::Heart,
            "lissajous" => TrajKind::Lissajous,
            "plum" => TrajKind::Plum,
            _ => return None,
        })
    }
}

/// Closed reference curve in the x-y plane at constant z, shifted by
/// `center`.
#[derive(Clone, Copy, Debug)]
pub struct TrajectorySpec {
    pub kind: TrajKind,
    /// Heart scale; the Lissajous amplitudes and plum radius are fixed.
    pub heart_scale: f64,
    pub period: f64,
    pub center: [f64; 3],
}

impl TrajectorySpec {
    pub fn new(kind: TrajKind, period: f64) -> TrajectorySpec {
        TrajectorySpec {
            kind,
            heart_scale: 0.04,
            period,
            center: [0.0; 3],
        }
    }

    /// Shifts the curve so it starts exactly at `start`.
    pub fn centered_at_start(mut self, start: &Vector) -> TrajectorySpec {
        self.center = [0.0; 3];
        let (w0, _) = raw_reference(&self, 0.0);
        self.center = [start[0] - w0[0], start[1] - w0[1], start[2] - w0[2]];
        self
    }
}

fn raw_reference(traj: &TrajectorySpec, t: f64) -> (Vector, Vector) {
    let tt = traj.period;
    let two_pi = 2.0 * std::f64::consts::PI;
    let (mut w, wd);
    match traj.kind {
        TrajKind::Heart => {
            let a = traj.heart_scale;
            let th = two_pi * t / tt;
            let thd = two_pi / tt;
            w = Vector::from_slice(&[
                a * (2.0 * th.sin() - (2.0 * th).sin()),
                a * (2.0 * th.cos() - (2.0 * th).cos()) - a,
                0.0,
            ]);
            wd = Vector::from_slice(&[
                a * (2.0 * th.cos() - 2.0 * (2.0 * th).cos()) * thd,
                a * (-2.0 * th.sin() + 2.0 * (2.0 * th).sin()) * thd,
                0.0,
            ]);
        }
        TrajKind::Lissajous => {
            let (amp_a, amp_b) = (0.06, 0.06);
            let (fa, fb) = (3.0, 2.0);
            let phase = std::f64::consts::FRAC_PI_2;
            let (wa, wb) = (two_pi * fa / tt, two_pi * fb / tt);
            w = Vector::from_slice(&[amp_a * (wa * t + phase).sin(), amp_b * (wb * t).sin(), 0.0]);
            wd = Vector::from_slice(&[
                amp_a * wa * (wa * t + phase).cos(),
                amp_b * wb * (wb * t).cos(),
                0.0,
            ]);
        }
        TrajKind::Plum => {
            let (r, n) = (0.1, 5.0);
            let half = 0.5 * std::f64::consts::PI * t / tt;
            let ph = two_pi * half.sin() * half.sin();
            let phd = two_pi * 2.0 * half.sin() * half.cos() * (0.5 * std::f64::consts::PI / tt);
            w = Vector::from_slice(&[
                r * (ph.cos() + (n * ph).cos() / n),
                r * (ph.sin() + (n * ph).sin() / n),
                0.0,
            ]);
            wd = Vector::from_slice(&[
                r * (-ph.sin() - (n * ph).sin()) * phd,
                r * (ph.cos() + (n * ph).cos()) * phd,
                0.0,
            ]);
        }
    }
    for i in 0..3 {
        w[i] += traj.center[i];
    }
    (w, wd)
}

fn raw_accel(traj: &TrajectorySpec, t: f64) -> Vector {
    let tt = traj.period;
    let two_pi = 2.0 * std::f64::consts::PI;
    match traj.kind {
        TrajKind::Heart => {
            let a = traj.heart_scale;
            let th = two_pi * t / tt;
            let thd = two_pi / tt;
            Vector::from_slice(&[
                a * (-2.0 * th.sin() + 4.0 * (2.0 * th).sin()) * thd * thd,
                a * (-2.0 * th.cos() + 4.0 * (2.0 * th).cos()) * thd * thd,
                0.0,
            ])
        }
        TrajKind::Lissajous => {
            let (amp_a, amp_b) = (0.06, 0.06);
            let (wa, wb) = (two_pi * 3.0 / tt, two_pi * 2.0 / tt);
            let phase = std::f64::consts::FRAC_PI_2;
            Vector::from_slice(&[
                -amp_a * wa * wa * (wa * t + phase).sin(),
                -amp_b * wb * wb * (wb * t).sin(),
                0.0,
            ])
        }
        TrajKind::Plum => {
            let (r, n) = (0.1, 5.0);
            let half_rate = 0.5 * std::f64::consts::PI / tt;
            let half = half_rate * t;
            let ph = two_pi * half.sin() * half.sin();
            let phd = two_pi * 2.0 * half.sin() * half.cos() * half_rate;
            let phdd = two_pi * 2.0 * half_rate * half_rate * (2.0 * half).cos();
            let dx_dph = r * (-ph.sin() - (n * ph).sin());
            let dy_dph = r * (ph.cos() + (n * ph).cos());
            let d2x = r * (-ph.cos() - n * (n * ph).cos());
            let d2y = r * (-ph.sin() - n * (n * ph).sin());
            Vector::from_slice(&[
                d2x * phd * phd + dx_dph * phdd,
                d2y * phd * phd + dy_dph * phdd,
                0.0,
            ])
        }
    }
}

/// Reference position and velocity at `t` in [0, period].
pub fn reference(traj: &TrajectorySpec, t: f64) -> Result<(Vector, Vector)> {
    if !(0.0..=traj.period).contains(&t) {
        return Err(Error::DomainError {
            what: "reference time outside [0, period]",
            value: t,
        });
    }
    Ok(raw_reference(traj, t))
}

/// Joint configuration and velocity at one control instant.
#[derive(Clone, Debug)]
pub struct KinState {
    pub q: Vector,
    pub qd: Vector,
    pub t: f64,
}

/// History carried between control steps for the backward differences of
/// the Jacobian and the smoothed bounds.
pub struct KinHistory {
    pub j_prev: Mat,
    pub d_prev: Vector,
}

/// One QP data sample of the kinematic-control problem at the current
/// state: H = I, rho = iota (q - q0), A = J, b = w', C = [I; -I],
/// d = [d+; -d-]. J' and d' come from backward differences along the
/// realized path (zero on the first step); b' is the analytic w''.
pub fn kin_qp_at(
    arm: &ArmModel,
    traj: &TrajectorySpec,
    state: &KinState,
    history: Option<&KinHistory>,
    dt: f64,
) -> (ProblemData, KinHistory) {
    let j = jacobian(arm, &state.q);
    let (_, wd) = raw_reference(traj, state.t);
    let wdd = raw_accel(traj, state.t);
    let (d_minus, d_plus) = smooth_bounds(arm, &state.q);
    let mut d = Vector::zeros(2 * ARM_DOF);
    for i in 0..ARM_DOF {
        d[i] = d_plus[i];
        d[ARM_DOF + i] = -d_minus[i];
    }
    let mut c = Mat::zeros(2 * ARM_DOF, ARM_DOF);
    for i in 0..ARM_DOF {
        c[(i, i)] = 1.0;
        c[(ARM_DOF + i, i)] = -1.0;
    }
    let mut rho = Vector::zeros(ARM_DOF);
    let mut rho_dot = Vector::zeros(ARM_DOF);
    for i in 0..ARM_DOF {
        rho[i] = arm.iota * (state.q[i] - arm.q0[i]);
        rho_dot[i] = arm.iota * state.qd[i];
    }
    let (j_dot, d_dot) = match history {
        Some(h) => {
            let mut jd = Mat::zeros(3, ARM_DOF);
            for r in 0..3 {
                for col in 0..ARM_DOF {
                    jd[(r, col)] = (j[(r, col)] - h.j_prev[(r, col)]) / dt;
                }
            }
            (jd, d.sub(&h.d_prev).scale(1.0 / dt))
        }
        None => (Mat::zeros(3, ARM_DOF), Vector::zeros(2 * ARM_DOF)),
    };
    let next = KinHistory {
        j_prev: j.clone(),
        d_prev: d.clone(),
    };
    (
        ProblemData {
            h: Mat::identity(ARM_DOF),
            rho,
            a: j,
            b: wd,
            c,
            d,
            h_dot: Mat::zeros(ARM_DOF, ARM_DOF),
            rho_dot,
            a_dot: j_dot,
            b_dot: wdd,
            c_dot: Mat::zeros(2 * ARM_DOF, ARM_DOF),
            d_dot,
        },
        next,
    )
}

/// Closed-loop tracking record.
#[derive(Clone, Debug, Default)]
pub struct TrackLog {
    pub times: Vec<f64>,
    pub q: Vec<Vector>,
    pub qd: Vec<Vector>,
    pub err: Vec<[f64; 3]>,
    pub res_norms: Vec<f64>,
    pub angle_violations: usize,
    pub velocity_violations: usize,
    pub return_gap: f64,
}

impl TrackLog {
    pub fn max_axis_error(&self) -> [f64; 3] {
        let mut m = [0.0f64; 3];
        for e in &self.err {
            for a in 0..3 {
                m[a] = m[a].max(e[a].abs());
            }
        }
        m
    }

    pub fn mean_axis_error(&self) -> [f64; 3] {
        let mut m = [0.0f64; 3];
        for e in &self.err {
            for a in 0..3 {
                m[a] += e[a].abs();
            }
        }
        let n = self.err.len().max(1) as f64;
        [m[0] / n, m[1] / n, m[2] / n]
    }

    /// CSV: `t, q1..q7, qd1..qd7, ex, ey, ez, res_norm`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=ARM_DOF {
            out.push_str(&format!(",q{i}"));
        }
        for i in 1..=ARM_DOF {
            out.push_str(&format!(",qd{i}"));
        }
        out.push_str(",ex,ey,ez,res_norm\n");
        for k in 0..self.times.len() {
            out.push_str(&format!("{:.17e}", self.times[k]));
            for i in 0..ARM_DOF {
                out.push_str(&format!(",{:.17e}", self.q[k][i]));
            }
            for i in 0..ARM_DOF {
                out.push_str(&format!(",{:.17e}", self.qd[k][i]));
            }
            for a in 0..3 {
                out.push_str(&format!(",{:.17e}", self.err[k][a]));
            }
            out.push_str(&format!(",{:.17e}\n", self.res_norms[k]));
        }
        out
    }
}

const VEL_TOL: f64 = 1e-9;

/// Runs the closed loop over one trajectory period: assemble the QP at the
/// current joints, advance the stacked KKT state one Euler step, integrate
/// the joints with the updated velocity, repeat.
pub fn track(
    arm: &ArmModel,
    traj: &TrajectorySpec,
    model: &ModelSpec,
    noise: &NoiseChannel,
    dt: f64,
    tau: f64,
    record_every: usize,
) -> Result<TrackLog> {
    model.validate()?;
    if noise.dim != ARM_DOF + 3 + 2 * ARM_DOF {
        return Err(Error::DimensionMismatch {
            what: "noise channel dimension",
            expected: ARM_DOF + 3 + 2 * ARM_DOF,
            got: noise.dim,
        });
    }
    let traj = traj.centered_at_start(&fk(arm, &arm.q0));
    let t_start = dt;
    let n_steps = ((traj.period - t_start) / dt).round() as usize;

    // the QP shell: dimensions only, sampling is done manually per step
    let shell = TimeVariantQP::new(ARM_DOF, 3, 2 * ARM_DOF, |_t| {
        unreachable!("sampled externally")
    });

    let mut q = arm.q0.clone();
    let mut state = KinState {
        q: q.clone(),
        qd: Vector::zeros(ARM_DOF),
        t: t_start,
    };
    // initialize the stacked state from the exact QP solution at t_start,
    // then rebuild the first sample so its drift terms see that velocity
    let (seed_data, _) = kin_qp_at(arm, &traj, &state, None, dt);
    let sol = oracle::solve_at(&problem_from_data(&seed_data), t_start)?;
    let mut y = oracle::stacked_state(&sol);
    let mut y_prev = y.clone();
    state.qd = y.slice(0, ARM_DOF);
    let (data0, mut history) = kin_qp_at(arm, &traj, &state, None, dt);

    let mut log = TrackLog::default();
    let q_start = q.clone();

    for k in 0..=n_steps {
        let t = t_start + k as f64 * dt;
        state = KinState {
            q: q.clone(),
            qd: y.slice(0, ARM_DOF),
            t,
        };
        let (data, next_history) = if k == 0 {
            (
                data0.clone(),
                KinHistory {
                    j_prev: history.j_prev.clone(),
                    d_prev: history.d_prev.clone(),
                },
            )
        } else {
            kin_qp_at(arm, &traj, &state, Some(&history), dt)
        };
        history = next_history;

        let kkt = KktState {
            y: y.clone(),
            t,
            tau,
        };
        let eps = residual_from(&shell, &data, &kkt)?;
        let (w, _) = raw_reference(&traj, t);
        let pe = fk(arm, &q);
        let err = [pe[0] - w[0], pe[1] - w[1], pe[2] - w[2]];

        for i in 0..ARM_DOF {
            if q[i] < arm.q_min[i] - VEL_TOL || q[i] > arm.q_max[i] + VEL_TOL {
                log.angle_violations += 1;
            }
            if state.qd[i] < arm.qd_min - VEL_TOL || state.qd[i] > arm.qd_max + VEL_TOL {
                log.velocity_violations += 1;
            }
        }
        if k % record_every == 0 || k == n_steps {
            log.times.push(t);
            log.q.push(q.clone());
            log.qd.push(state.qd.clone());
            log.err.push(err);
            log.res_norms.push(eps.norm2());
        }
        if k == n_steps {
            break;
        }

        let blocks = assemble_blocks_from(&shell, &data, &kkt)?;
        let delta = noise.sample(t, k as u64);
        let ctx = EulerCtx {
            dt,
            y_prev: &y_prev,
        };
        let out = rhs(model, &blocks, &eps, &y, t, &delta, &ctx)?;
        y_prev = y.clone();
        y.axpy(dt, &out.y_dot);
        if y.norm_inf() > 1e12 || !y.is_finite() {
            return Err(Error::NumericalBlowup {
                step: k,
                t,
                partial: Box::default(),
            });
        }
        // joints advance with the freshly updated velocity
        let qd_new = y.slice(0, ARM_DOF);
        q.axpy(dt, &qd_new);
    }
    log.return_gap = q.sub(&q_start).norm_inf();
    Ok(log)
}

/// Wraps one fixed `ProblemData` sample as a static problem (used to seed
/// the tracking state from the oracle).
fn problem_from_data(data: &ProblemData) -> TimeVariantQP {
    let data = data.clone();
    TimeVariantQP::new(ARM_DOF, 3, 2 * ARM_DOF, move |_t| data.clone())
}
