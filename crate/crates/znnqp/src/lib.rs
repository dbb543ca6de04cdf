//! Solvers for time-variant quadratic programs built on zeroing-neural-network
//! dynamics, with a strictly predefined-time convergent, noise-resilient
//! fractional-order model as the centerpiece.
//!
//! A time-variant QP
//!
//! ```text
//! min  x'H(t)x/2 + rho(t)'x
//! s.t. A(t)x = b(t),  C(t)x <= d(t)
//! ```
//!
//! is rewritten through its KKT conditions (inequalities smoothed by the
//! perturbed Fischer-Burmeister function) into one vector equation
//! `f(y, t) = 0` over the stacked primal-dual state. A family of recurrent
//! models drives the residual `eps(t) = f(y(t), t)` to zero while the
//! problem data moves; everything is integrated by fixed-step forward Euler.
//!
//! Modules:
//! - [`numkit`]: small dense linear algebra, gamma function, conformable
//!   (fractional) derivative checks, seeded uniform noise.
//! - [`tvqp`]: problem model, residual, and the coefficient blocks of its
//!   exact time-derivative identity.
//! - [`models`]: the eight model dynamics (gradient flows and zeroing
//!   models, integer- and fractional-order, including the predefined-time
//!   anti-noise activation).
//! - [`noise`]: seedable bounded disturbance channels.
//! - [`integrator`]: the Euler loop with residual/Lyapunov logging.
//! - [`oracle`]: brute-force active-set ground truth for error measurement.
//! - [`robot`]: 7-DOF arm kinematics and closed-loop velocity-level
//!   trajectory tracking.
//! - [`cli`]: the `bench`/`track`/`oracle`/`verify` subcommands behind the
//!   thin `znnqp` binary.
//!
//! Every runnable capability has a matching example under `examples/`;
//! start with `examples/compare_models.rs`.

// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the
// out-of-domain sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod integrator;
pub mod models;
pub mod noise;
pub mod numkit;
pub mod oracle;
pub mod robot;
pub mod tvqp;

pub use error::{Error, Result};
