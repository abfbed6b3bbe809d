//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NonlinearityError {
    /// Inversion target outside the range of phi (e.g. the mean curvature
    /// operator saturates at 1).
    #[error("inversion target {target} is outside the range of phi (sup {sup})")]
    OutOfRange { target: f64, sup: f64 },
    #[error("kernel integrand t phi'(t)/l(t) is not integrable at 0 (local exponent {exponent})")]
    NotIntegrableAtZero { exponent: f64 },
    #[error("unknown structural condition `{0}`")]
    UnknownCondition(String),
    #[error("phi must be strictly increasing; sampled decrease near t = {at}")]
    NotIncreasing { at: f64 },
}

#[derive(Debug, Error)]
pub enum KoError {
    /// K_infinity is finite, so the composition K^{-1} o F leaves the kernel
    /// range and the condition at infinity is meaningless for this kernel.
    #[error(
        "kernel range [0, {k_sup}) is exhausted before infinity; \
         the condition is meaningless for the standard kernel (try the mean curvature variant)"
    )]
    KernelUndefined { k_sup: f64 },
    #[error("non-positive sample g({at}) = {value} in exponent estimation")]
    NonPositiveSample { at: f64, value: f64 },
    #[error(transparent)]
    Nonlinearity(#[from] NonlinearityError),
}

#[derive(Debug, Error)]
pub enum ModelError {
    /// No positive Green kernel: v_g^{-1/(p-1)} is integrable at infinity
    /// exactly when the model is non-parabolic.
    #[error("model is p-parabolic for p = {p}: v_g^(-1/(p-1)) diverges at infinity")]
    Parabolic { p: f64 },
    #[error("green kernel value {value} out of range (0, {sup})")]
    OutOfRange { value: f64, sup: f64 },
    #[error("no admissible D for the closed-form comparison solution (range empty)")]
    NoAdmissibleD,
}

#[derive(Debug, Error)]
pub enum BvpError {
    #[error("restriction inequality fails: {lhs} >= phi(xi) = {rhs}; shrink eta or T")]
    RestrictionViolated { lhs: f64, rhs: f64 },
    #[error("fixed-point iteration did not converge: {detail}")]
    NoConvergence { detail: String },
    #[error(transparent)]
    Nonlinearity(#[from] NonlinearityError),
}

#[derive(Debug, Error)]
pub enum ConstructError {
    /// The construction needs the Keller-Osserman integral to converge.
    #[error("Keller-Osserman condition violated: {0}")]
    KellerOssermanViolated(String),
    #[error("structural condition {condition} failed (constant estimate {constant})")]
    ConditionFailed { condition: String, constant: f64 },
    #[error("parameter search exhausted after {steps} halvings ({context})")]
    SearchExhausted { steps: usize, context: String },
    #[error("weight incompatible: (1/v) int v*beta grows without bound (last value {last})")]
    WeightIncompatible { last: f64 },
    #[error(transparent)]
    Bvp(#[from] BvpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Nonlinearity(#[from] NonlinearityError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}:{col}: {message}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{path}: unknown key `{key}` (line {line})")]
    UnknownKey {
        path: String,
        key: String,
        line: usize,
    },
    #[error("{path}: missing required key `{key}`")]
    MissingKey { path: String, key: String },
    #[error("{path}: key `{key}`: {message}")]
    BadValue {
        path: String,
        key: String,
        message: String,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
