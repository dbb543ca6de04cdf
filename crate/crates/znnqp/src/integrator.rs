//! Fixed-step forward-Euler integration of a model over a time-variant QP,
//! with noise injection, diagnostics, and trajectory logging.

use crate::error::Error;
use crate::models::{rhs, EulerCtx, ModelSpec};
use crate::noise::NoiseChannel;
use crate::numkit::Vector;
use crate::tvqp::{assemble_blocks_from, residual_from, KktState, TimeVariantQP};

#[derive(Clone, Copy, Debug, Default)]
pub struct Diagnostics {
    pub lyapunov: bool,
    pub condition_number: bool,
}

/// One integration run: step size, horizon, model, disturbance, initial
/// state, and logging stride.
pub struct RunConfig {
    pub dt: f64,
    pub t_end: f64,
    pub model: ModelSpec,
    pub noise: NoiseChannel,
    pub y0: KktState,
    pub record_every: usize,
    pub diagnostics: Diagnostics,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.dt > 0.0) {
            return Err(Error::DomainError {
                what: "dt must be positive",
                value: self.dt,
            });
        }
        if !(self.t_end > self.dt) {
            return Err(Error::DomainError {
                what: "t_end must exceed dt",
                value: self.t_end,
            });
        }
        if self.record_every == 0 {
            return Err(Error::DomainError {
                what: "record_every must be at least 1",
                value: 0.0,
            });
        }
        self.model.validate()
    }
}

/// Recorded series of a run. All series share the same length.
#[derive(Clone, Debug, Default)]
pub struct RunLog {
    pub times: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub states: Vec<Vector>,
    pub lyapunov_values: Option<Vec<f64>>,
    pub degenerate_steps: Vec<usize>,
}

impl RunLog {
    /// Residual norm at the logged sample closest to `t`; NaN on an empty log.
    pub fn residual_at(&self, t: f64) -> f64 {
        if self.times.is_empty() {
            return f64::NAN;
        }
        let mut best = 0;
        let mut gap = f64::INFINITY;
        for (i, ti) in self.times.iter().enumerate() {
            let g = (ti - t).abs();
            if g < gap {
                gap = g;
                best = i;
            }
        }
        self.residual_norms[best]
    }

    /// Max residual norm over logged samples with `t` in [lo, hi].
    pub fn residual_max_on(&self, lo: f64, hi: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.residual_norms)
            .filter(|(t, _)| **t >= lo - 1e-12 && **t <= hi + 1e-12)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    /// Median residual norm over logged samples with `t` in [lo, hi].
    pub fn residual_median_on(&self, lo: f64, hi: f64) -> f64 {
        let mut vals: Vec<f64> = self
            .times
            .iter()
            .zip(&self.residual_norms)
            .filter(|(t, _)| **t >= lo - 1e-12 && **t <= hi + 1e-12)
            .map(|(_, r)| *r)
            .collect();
        if vals.is_empty() {
            return f64::NAN;
        }
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals[vals.len() / 2]
    }

    /// CSV serialization: header `t,res_norm,y_0..y_k[,V]`, full-precision
    /// scientific notation.
    pub fn to_csv(&self) -> String {
        let dim = self.states.first().map_or(0, |s| s.len());
        let mut out = String::new();
        out.push_str("t,res_norm");
        for i in 0..dim {
            out.push_str(&format!(",y_{i}"));
        }
        if self.lyapunov_values.is_some() {
            out.push_str(",V");
        }
        out.push('\n');
        for k in 0..self.times.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e}",
                self.times[k], self.residual_norms[k]
            ));
            for i in 0..dim {
                out.push_str(&format!(",{:.17e}", self.states[k][i]));
            }
            if let Some(v) = &self.lyapunov_values {
                out.push_str(&format!(",{:.17e}", v[k]));
            }
            out.push('\n');
        }
        out
    }
}

const BLOWUP_LIMIT: f64 = 1e12;

/// Integrates `y' = model(...)` from `t = dt` (not zero: fractional gains
/// `t^(alpha-1)` diverge at the origin) to `t_end`, logging every
/// `record_every` steps. The first logged row is the initial state stamped
/// at the start time.
pub fn integrate(problem: &TimeVariantQP, cfg: &RunConfig) -> Result<RunLog, Error> {
    cfg.validate()?;
    if cfg.y0.y.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            what: "initial state length",
            expected: problem.dim(),
            got: cfg.y0.y.len(),
        });
    }
    let dt = cfg.dt;
    let t_start = dt;
    let n_steps = ((cfg.t_end - t_start) / dt).round() as usize;
    let tau = cfg.y0.tau;
    let t_p = cfg.model.t_p();

    let mut log = RunLog {
        lyapunov_values: if cfg.diagnostics.lyapunov {
            Some(Vec::new())
        } else {
            None
        },
        ..RunLog::default()
    };
    let mut y = cfg.y0.y.clone();
    let mut y_prev = y.clone();

    for k in 0..=n_steps {
        let t = t_start + k as f64 * dt;
        let data = problem.sample(t);
        let state = KktState {
            y: y.clone(),
            t,
            tau,
        };
        let eps = residual_from(problem, &data, &state)?;
        if k % cfg.record_every == 0 || k == n_steps {
            log.times.push(t);
            log.residual_norms.push(eps.norm2());
            log.states.push(y.clone());
            if let Some(v) = &mut log.lyapunov_values {
                v.push(lyapunov_value(eps.norm2(), t, cfg.model.t_c, t_p, dt).unwrap_or(f64::NAN));
            }
        }
        if k == n_steps {
            break;
        }
        let blocks = assemble_blocks_from(problem, &data, &state)?;
        let delta = cfg.noise.sample(t, k as u64);
        let ctx = EulerCtx {
            dt,
            y_prev: &y_prev,
        };
        let out = rhs(&cfg.model, &blocks, &eps, &y, t, &delta, &ctx)?;
        if out.degenerate {
            log.degenerate_steps.push(k);
        }
        if cfg.diagnostics.condition_number && condition_estimate(&blocks.m) > 1e12 {
            log.degenerate_steps.push(k);
        }
        y_prev = y.clone();
        y.axpy(dt, &out.y_dot);
        if y.norm_inf() > BLOWUP_LIMIT || !y.is_finite() {
            return Err(Error::NumericalBlowup {
                step: k,
                t,
                partial: Box::new(log),
            });
        }
    }
    Ok(log)
}

fn condition_estimate(m: &crate::numkit::Mat) -> f64 {
    // crude 1-norm estimate: ||M||_1 * ||M^-1 e||_1 on a probe vector
    let n = m.rows();
    if n == 0 {
        return 1.0;
    }
    let mut norm1 = 0.0f64;
    for c in 0..n {
        let mut s = 0.0;
        for r in 0..n {
            s += m[(r, c)].abs();
        }
        norm1 = norm1.max(s);
    }
    let probe = Vector::from_vec(
        (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    );
    match crate::numkit::solve_square(m, &probe) {
        Ok(s) if !s.degenerate => norm1 * s.x.norm_inf() / probe.norm_inf(),
        _ => f64::INFINITY,
    }
}

/// Lyapunov functional of the predefined-time analysis:
/// `||eps|| / (t_c - t)` before `t_c` (valid until `t_c - 10 dt`) and
/// `||eps|| / (t - t_p)` from `t_c` on. Returns `None` in the gap.
pub fn lyapunov_value(res_norm: f64, t: f64, t_c: f64, t_p: f64, dt: f64) -> Option<f64> {
    if t < t_c - 10.0 * dt {
        Some(res_norm / (t_c - t))
    } else if t >= t_c {
        Some(res_norm / (t - t_p).max(dt))
    } else {
        None
    }
}

/// Extracts `(t, V)` pairs from a finished run, omitting the samples in the
/// gap window just below `t_c`.
pub fn lyapunov_series(log: &RunLog, t_c: f64, t_p: f64, dt: f64) -> Vec<(f64, f64)> {
    log.times
        .iter()
        .zip(&log.residual_norms)
        .filter_map(|(t, r)| lyapunov_value(*r, *t, t_c, t_p, dt).map(|v| (*t, v)))
        .collect()
}
