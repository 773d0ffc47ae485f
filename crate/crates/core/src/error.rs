//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("sieve limit {limit} exceeds the configured budget {budget}")]
    SieveBudget { limit: u64, budget: u64 },

    #[error("von Mangoldt function is undefined at n = 0")]
    VonMangoldtZero,

    #[error("zeta has a pole at s = 1")]
    ZetaPole,

    #[error("height |t| = {t:.3e} outside the validated range (max {max:.1e})")]
    HeightRange { t: f64, max: f64 },

    #[error("Re(s) = {sigma} is outside the evaluation domain (need Re(s) > 0)")]
    SigmaRange { sigma: f64 },

    #[error(
        "branch continuation at {sigma:.6}+{t:.6}i passed within |zeta| = {modulus:.3e} \
         of a zero (threshold {threshold:.1e}); cannot certify the branch"
    )]
    BranchNearZero {
        sigma: f64,
        t: f64,
        modulus: f64,
        threshold: f64,
    },

    #[error("cutoff {cutoff} exceeds the prime table limit {limit}")]
    TableCutoff { cutoff: f64, limit: u64 },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("target function vanishes near s = {0} (|f| = {1:.3e}); log f is undefined there")]
    ZeroTarget(Complex64, f64),

    #[error("target function winds around 0 on the boundary; it must have a zero inside the disc")]
    TargetWinds,

    #[error("disc [{lo:.4}, {hi:.4}] must lie inside the strip 1/2 < Re(s) < 1")]
    DiscOutsideStrip { lo: f64, hi: f64 },

    #[error("invalid search window: {0}")]
    BadWindow(String),

    #[error("|M| = {m} exceeds the interval-intersection capacity {cap}; use the sampling estimator")]
    TooManyPrimes { m: usize, cap: usize },

    #[error("window exponents must satisfy B > A > {threshold:.4} (got A = {a}, B = {b})")]
    ExponentConstraint { a: f64, b: f64, threshold: f64 },

    #[error("{path}:{line}: {message}")]
    ZeroTableParse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("zero table (max ordinate {max_ordinate:.3}) does not cover height {needed:.3}")]
    Coverage { needed: f64, max_ordinate: f64 },

    #[error("quadrature did not stabilise: successive refinements differ by {relative:.3e}")]
    QuadratureUnstable { relative: f64 },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}
