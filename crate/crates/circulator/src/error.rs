use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by construction, solving and observable extraction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("factor index {index} out of range for a space with {n_factors} factors")]
    FactorOutOfRange { index: usize, n_factors: usize },

    #[error("factor {index} is an atom; a bosonic mode is required")]
    NotAMode { index: usize },

    #[error("factor {index} is a mode; a two-level atom is required")]
    NotAnAtom { index: usize },

    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("operator dimension {got} does not match space dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operators live on different Hilbert spaces")]
    SpaceMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid port {0}; ports are numbered 1..=4")]
    InvalidPort(u8),

    #[error("output port {port} is not represented by the {model} model for input port {input}")]
    UnreachablePort { port: u8, input: u8, model: &'static str },

    #[error(
        "Fock truncation n_max = {n_max} too small: the two-mode model with an atom requires n_max >= 2"
    )]
    TruncationTooSmall { n_max: usize },

    #[error(
        "Fock truncation n_max = {n_max} needs a {dim}x{dim} superoperator ({bytes} bytes); refusing to allocate"
    )]
    TruncationTooLarge { n_max: usize, dim: usize, bytes: usize },

    #[error("transmissions are undefined for zero drive amplitude")]
    ZeroDrive,

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error(
        "steady state is not unique (Liouvillian null space has dimension > 1); add drive or dissipation"
    )]
    NonUniqueSteadyState,

    #[error(
        "steady-state residual {residual:.3e} exceeds tolerance {tolerance:.3e}; solver did not converge"
    )]
    SteadyStateResidual { residual: f64, tolerance: f64 },

    #[error("state validation failed: {0}")]
    InvalidState(String),

    #[error(
        "time step underflow at t = {t:.6e} us (h = {h:.3e}): the generator is too stiff on this \
         time scale; rescale rates to rad/us of order one or shorten the interval"
    )]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error(
        "output port {port} is too dark for correlation analysis (relative flux {flux:.3e}); \
         the transmitted photon number is too small to normalize g2"
    )]
    DarkPort { port: u8, flux: f64 },

    #[error("empty scan")]
    EmptyScan,

    #[error("scan ratio {0} < 1: kappa_b would be negative under kappa_a = kappa_b + kappa_0")]
    RatioOutOfRange(f64),

    #[error("analytic closed forms require kappa_a = kappa_b (got {kappa_a} and {kappa_b} rad/us)")]
    UnequalFiberCoupling { kappa_a: f64, kappa_b: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
