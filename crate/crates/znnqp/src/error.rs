//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("domain error: {what} (value {value})")]
    DomainError { what: &'static str, value: f64 },

    #[error("no KKT point found at t = {t}")]
    Infeasible { t: f64 },

    #[error("every candidate KKT system is singular at t = {t}")]
    IllPosed { t: f64 },

    #[error("state norm exceeded 1e12 at step {step} (t = {t})")]
    NumericalBlowup {
        step: usize,
        t: f64,
        partial: Box<crate::integrator::RunLog>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
