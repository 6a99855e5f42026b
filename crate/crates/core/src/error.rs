use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent overflow: |Re| = {re:.3} exceeds cap {cap}")]
    Overflow { re: f64, cap: f64 },

    #[error("coefficient overflow at index {index}")]
    CoefficientOverflow { index: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("singular flow: |1 + quad*tau| = {0:e}")]
    SingularFlow(f64),

    #[error("flow time |tau| = {tau_abs} outside the admissible radius {radius} (type {sigma})")]
    Domain { tau_abs: f64, radius: f64, sigma: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finder did not converge after {sweeps} sweeps (max residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("zero at {z} is not simple (|F'| = {d1:e}, scale {scale:e})")]
    NonSimpleZero { z: Complex64, d1: f64, scale: f64 },

    #[error("collision: zeros {j} and {k} are {distance:e} apart")]
    Collision { j: usize, k: usize, distance: f64 },

    #[error("start point {z} is not a zero (relative residual {residual:e})")]
    NotAZero { z: Complex64, residual: f64 },

    #[error("base point {0} coincides with a zero")]
    BasePointAtZero(Complex64),

    #[error("moment M({0}) missing from table")]
    MissingMoment(usize),

    #[error("determinant {0} differs from 1")]
    Determinant(f64),

    #[error("sample too small: {0}")]
    SampleSize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
