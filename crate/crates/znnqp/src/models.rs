//! Right-hand-side dynamics of the solver models.
//!
//! Two families share the KKT machinery from [`crate::tvqp`]:
//!
//! * gradient-flow models (GNN, FO-GNN, PRAGNN, NIFZNN) return `y'` directly;
//! * zeroing models (ZNN, SPTC-NT-ZNN, PTC-FOZNN, SPTC-AN-FOZNN) solve
//!   `M y' = -N y - sigma - gain(t) * Phi(eps) + delta` each step.
//!
//! The SPTC-AN-FOZNN activation is a piecewise predefined-time stabilizer
//! whose second branch carries a constant-magnitude sliding term. How that
//! discontinuous term is discretized is configurable, see [`SlidingPolicy`].

use crate::error::Error;
use crate::numkit::{gamma_fn, solve_square, Vector};
use crate::tvqp::KktBlocks;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Gnn,
    Znn,
    FoGnn,
    Pragnn,
    SptcNtZnn,
    Nifznn,
    PtcFoznn,
    SptcAnFoznn,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Gnn => "gnn",
            ModelKind::Znn => "znn",
            ModelKind::FoGnn => "fo_gnn",
            ModelKind::Pragnn => "pragnn",
            ModelKind::SptcNtZnn => "sptc_nt_znn",
            ModelKind::Nifznn => "nifznn",
            ModelKind::PtcFoznn => "ptc_foznn",
            ModelKind::SptcAnFoznn => "sptc_an_foznn",
        }
    }

    pub fn from_name(name: &str) -> Option<ModelKind> {
        Some(match name {
            "gnn" => ModelKind::Gnn,
            "znn" => ModelKind::Znn,
            "fo_gnn" => ModelKind::FoGnn,
            "pragnn" => ModelKind::Pragnn,
            "sptc_nt_znn" => ModelKind::SptcNtZnn,
            "nifznn" => ModelKind::Nifznn,
            "ptc_foznn" => ModelKind::PtcFoznn,
            "sptc_an_foznn" => ModelKind::SptcAnFoznn,
            _ => return None,
        })
    }
}

/// Discretization of the constant-magnitude sliding term in the
/// predefined-time activations.
///
/// Forward Euler cannot represent a set-valued sign term: stepping the full
/// magnitude through zero produces limit-cycle chattering. `Saturated` caps
/// the whole activation so a single step never drives the residual past the
/// origin (gain at most 1/dt, the largest forward Euler resolves), which
/// yields chatter-free residual floors. `Explicit` applies the designed
/// sliding magnitude as written; the residual then carries an O(dt*zeta)
/// chatter band, but the sign-term average cancels disturbance bias, which
/// is what integrated outputs (e.g. tracked positions) care about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SlidingPolicy {
    #[default]
    Saturated,
    Explicit,
}

/// Which of the model dynamics to integrate, with its gain schedule and
/// activation parameters.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Gain factor, > 0.
    pub gamma: f64,
    /// Fractional order in (0, 1].
    pub alpha: f64,
    /// Predefined convergence time, > 0 (seconds).
    pub t_c: f64,
    /// Sliding gain, must exceed the noise bound.
    pub zeta: f64,
    /// Noise magnitude bound the model is configured against (>= 0).
    pub delta_bound: f64,
    /// Exponent of the nonlinear-term activation, in (0, 1).
    pub p_exp: f64,
    /// Exponent split of the predefined-time activation, in (0, 1).
    pub kappa: f64,
    /// Secondary linear gain (gradient family).
    pub gamma2: f64,
    /// Normalized-term gain (gradient family).
    pub gamma3: f64,
    /// Constant sign-term weight of the nonlinear-term activation.
    pub xi: f64,
    /// Regularizer inside the fractional-power state difference.
    pub fo_eps: f64,
    /// Override for the leading gain k(t) of the power-rate model; defaults
    /// to `gamma` when unset.
    pub k_gain: Option<f64>,
    pub sliding: SlidingPolicy,
}

impl ModelSpec {
    /// Benchmark configuration: gamma = 2, t_c = 1 s, p = kappa = 0.5,
    /// zeta = 5 * delta_bound (1.0 when noise-free), gamma2 = 0,
    /// gamma3 = zeta, xi = zeta / gamma.
    pub fn benchmark(kind: ModelKind, alpha: f64, delta_bound: f64) -> ModelSpec {
        let gamma = 2.0;
        let zeta = if delta_bound > 0.0 {
            5.0 * delta_bound
        } else {
            1.0
        };
        ModelSpec {
            kind,
            gamma,
            alpha,
            t_c: 1.0,
            zeta,
            delta_bound,
            p_exp: 0.5,
            kappa: 0.5,
            gamma2: 0.0,
            gamma3: zeta,
            xi: zeta / gamma,
            fo_eps: 1e-6,
            k_gain: None,
            sliding: SlidingPolicy::Saturated,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.gamma > 0.0) {
            return Err(Error::DomainError {
                what: "gamma must be positive",
                value: self.gamma,
            });
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::DomainError {
                what: "alpha must lie in (0, 1]",
                value: self.alpha,
            });
        }
        if !(self.t_c > 0.0) {
            return Err(Error::DomainError {
                what: "t_c must be positive",
                value: self.t_c,
            });
        }
        if !(self.delta_bound >= 0.0) {
            return Err(Error::DomainError {
                what: "delta_bound must be nonnegative",
                value: self.delta_bound,
            });
        }
        if self.zeta <= self.delta_bound {
            return Err(Error::DomainError {
                what: "zeta must exceed delta_bound",
                value: self.zeta,
            });
        }
        if !(self.p_exp > 0.0 && self.p_exp < 1.0) {
            return Err(Error::DomainError {
                what: "p_exp must lie in (0, 1)",
                value: self.p_exp,
            });
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::DomainError {
                what: "kappa must lie in (0, 1)",
                value: self.kappa,
            });
        }
        Ok(())
    }

    /// Switch point of the second activation branch.
    pub fn t_p(&self) -> f64 {
        t_p_of(self.zeta, self.delta_bound, self.t_c).expect("validated spec")
    }

    /// Time-varying gain: `gamma` for integer-order models, a decaying
    /// `gamma * t^(alpha-1)` for the fractional-order family.
    pub fn gain_at(&self, t: f64) -> f64 {
        match self.kind {
            ModelKind::PtcFoznn | ModelKind::SptcAnFoznn => self.gamma * t.powf(self.alpha - 1.0),
            _ => self.gamma,
        }
    }
}

/// Settling point of the second activation branch:
/// `(1 - exp(-pi / (2 sqrt(zeta (zeta - Delta))))) * t_c`, in (0, t_c).
pub fn t_p_of(zeta: f64, delta: f64, t_c: f64) -> Result<f64, Error> {
    if !(t_c > 0.0) {
        return Err(Error::DomainError {
            what: "t_c must be positive",
            value: t_c,
        });
    }
    if !(delta >= 0.0) {
        return Err(Error::DomainError {
            what: "delta must be nonnegative",
            value: delta,
        });
    }
    if !(zeta > delta) {
        return Err(Error::DomainError {
            what: "zeta must exceed delta",
            value: zeta,
        });
    }
    Ok((1.0 - (-std::f64::consts::PI / (2.0 * (zeta * (zeta - delta)).sqrt())).exp()) * t_c)
}

/// Predefined-time stabilizer with a noise-rejecting second branch.
///
/// For `t < t_c`:  `(x/(t_c - t) + gamma ||x||^2 / (t_c - t)^2 * x/||x||) / (gamma t_c^(alpha-1))`
/// For `t >= t_c`: `(x/(t_p - t) + (zeta + gamma t^(alpha-1) ||x||^2/(t_p - t)^2) * x/||x||) / (gamma t^(alpha-1))`
///
/// Returns zero at the origin. Denominators are floored at `floor` (the
/// integrator passes its step size) since forward Euler cannot resolve
/// faster rates anyway.
pub fn sptc_an_activation(x: &Vector, t: f64, spec: &ModelSpec, floor: f64) -> Vector {
    let norm = x.norm2();
    if norm == 0.0 {
        return Vector::zeros(x.len());
    }
    if t < spec.t_c {
        let dtc = (spec.t_c - t).max(floor);
        let pref = 1.0 / (spec.gamma * spec.t_c.powf(spec.alpha - 1.0));
        // both terms are parallel to x
        x.scale(pref * (1.0 / dtc + spec.gamma * norm / (dtc * dtc)))
    } else {
        let dtp = (t - spec.t_p()).max(floor);
        let g = spec.gamma * t.powf(spec.alpha - 1.0);
        let coeff = -1.0 / dtp + (spec.zeta + g * norm * norm / (dtp * dtp)) / norm;
        x.scale(coeff / g)
    }
}

/// Piecewise activation of the nonlinear-term zeroing model: a scaled state
/// before `t_c`, then per-component linear + power + sign terms.
pub fn sptc_nt_activation(x: &Vector, t: f64, spec: &ModelSpec, floor: f64) -> Vector {
    if t < spec.t_c {
        let dtc = (spec.t_c - t).max(floor);
        x.scale(1.0 / dtc)
    } else {
        // sign(0) must be 0 so the origin stays an equilibrium
        let sgn = |v: f64| if v == 0.0 { 0.0 } else { v.signum() };
        x.map(|v| v + v.abs().powf(spec.p_exp) * sgn(v) + spec.xi * sgn(v))
    }
}

/// Power-rate predefined-time activation:
/// `pi/(2 kappa gamma t_c^alpha) (||x||^(1-kappa) + ||x||^(1+kappa)) x/||x||`.
pub fn ptc_activation(x: &Vector, spec: &ModelSpec) -> Vector {
    let norm = x.norm2();
    if norm == 0.0 {
        return Vector::zeros(x.len());
    }
    let lead = std::f64::consts::PI / (2.0 * spec.kappa * spec.gamma * spec.t_c.powf(spec.alpha));
    let mag = lead * (norm.powf(1.0 - spec.kappa) + norm.powf(1.0 + spec.kappa));
    x.scale(mag / norm)
}

/// Per-step context the integrator hands to the model evaluation.
pub struct EulerCtx<'a> {
    /// Step size; also the floor for the piecewise-activation denominators.
    pub dt: f64,
    /// Previous accepted state (used by the fractional-power gradient model).
    pub y_prev: &'a Vector,
}

/// Model output for one step.
pub struct RhsOutput {
    pub y_dot: Vector,
    /// Set when a normalization guard fired or the linear solve degenerated.
    pub degenerate: bool,
}

const NORMALIZATION_GUARD: f64 = 1e-14;

/// Evaluates the selected model's `y'` at the current state.
pub fn rhs(
    spec: &ModelSpec,
    blocks: &KktBlocks,
    eps: &Vector,
    y: &Vector,
    t: f64,
    delta: &Vector,
    ctx: &EulerCtx,
) -> Result<RhsOutput, Error> {
    let dim = y.len();
    if eps.len() != dim || delta.len() != dim || blocks.m.rows() != dim {
        return Err(Error::DimensionMismatch {
            what: "rhs operand dimensions",
            expected: dim,
            got: eps.len(),
        });
    }
    match spec.kind {
        ModelKind::Gnn => {
            let mut y_dot = blocks.m.t_matvec(eps).scale(-spec.gamma);
            y_dot.axpy(1.0, delta);
            Ok(RhsOutput {
                y_dot,
                degenerate: false,
            })
        }
        ModelKind::FoGnn => {
            let grad = blocks.m.t_matvec(eps);
            let gamma_factor = spec.gamma / gamma_fn(2.0 - spec.alpha)?;
            let mut y_dot = Vector::zeros(dim);
            for i in 0..dim {
                let base = (y[i] - ctx.y_prev[i] + spec.fo_eps)
                    .abs()
                    .powf(1.0 - spec.alpha);
                y_dot[i] = -gamma_factor * grad[i] * base + delta[i];
            }
            Ok(RhsOutput {
                y_dot,
                degenerate: false,
            })
        }
        ModelKind::Pragnn => {
            let grad = blocks.m.t_matvec(eps);
            let k = spec.k_gain.unwrap_or(spec.gamma);
            let mut y_dot = grad.scale(-(k + spec.gamma2));
            let gnorm = grad.norm2();
            let mut degenerate = false;
            if gnorm < NORMALIZATION_GUARD {
                degenerate = true;
            } else {
                y_dot.axpy(-spec.gamma3 / gnorm, &grad);
            }
            y_dot.axpy(1.0, delta);
            Ok(RhsOutput { y_dot, degenerate })
        }
        ModelKind::Nifznn => {
            let grad = blocks.m.t_matvec(eps);
            let gnorm_sq = grad.dot(&grad);
            let mut degenerate = false;
            let mut y_dot = Vector::zeros(dim);
            if gnorm_sq < NORMALIZATION_GUARD * NORMALIZATION_GUARD {
                degenerate = true;
            } else {
                let dt_eps = crate::tvqp::partial_time_residual(blocks, y)?;
                let scalar = eps.dot(&dt_eps) + spec.gamma * eps.dot(eps) / 2.0;
                y_dot = grad.scale(-scalar / gnorm_sq);
            }
            y_dot.axpy(1.0, delta);
            Ok(RhsOutput { y_dot, degenerate })
        }
        ModelKind::Znn | ModelKind::SptcNtZnn | ModelKind::PtcFoznn | ModelKind::SptcAnFoznn => {
            let activation = match spec.kind {
                ModelKind::Znn => eps.clone(),
                ModelKind::SptcNtZnn => sptc_nt_activation(eps, t, spec, ctx.dt),
                ModelKind::PtcFoznn => ptc_activation(eps, spec),
                ModelKind::SptcAnFoznn => sptc_an_activation(eps, t, spec, ctx.dt),
                _ => unreachable!(),
            };
            let gain = spec.gain_at(t);
            let mut term = activation.scale(gain);
            if spec.kind == ModelKind::SptcAnFoznn {
                term = saturate_activation(term, eps, t, spec, ctx.dt);
            }
            // M y' = -N y - sigma - gain * Phi(eps) + delta
            let mut r = blocks.n.matvec(y).scale(-1.0);
            r.axpy(-1.0, &blocks.sigma);
            r.axpy(-1.0, &term);
            r.axpy(1.0, delta);
            let solved = solve_square(&blocks.m, &r)?;
            Ok(RhsOutput {
                y_dot: solved.x,
                degenerate: solved.degenerate || blocks.degenerate,
            })
        }
    }
}

/// Rate cap for the predefined-time stabilizer. The cap is `||eps||/dt`
/// (one step may zero the residual but never overshoot it); under
/// `SlidingPolicy::Explicit` the sliding magnitude `zeta` is exempted so
/// the sign term keeps its designed amplitude after `t_c`.
fn saturate_activation(term: Vector, eps: &Vector, t: f64, spec: &ModelSpec, dt: f64) -> Vector {
    let n = term.norm2();
    if n == 0.0 {
        return term;
    }
    let mut cap = eps.norm2() / dt;
    if spec.sliding == SlidingPolicy::Explicit && t >= spec.t_c {
        cap += spec.zeta;
    }
    if n > cap {
        term.scale(cap / n)
    } else {
        term
    }
}
