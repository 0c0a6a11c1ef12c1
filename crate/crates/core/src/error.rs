use thiserror::Error;

/// Errors surfaced by model construction and the numerical solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParam { name: &'static str, message: String },

    #[error("operator spaces do not match: {left} vs {right}")]
    SpaceMismatch { left: usize, right: usize },

    #[error("local operator dimension {found} does not match site dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("site index {site} out of range for {sites} subsystems")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("state shape {found} does not match space dimension {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("operation requires a cascaded variant, got {variant}")]
    NotCascaded { variant: &'static str },

    #[error("step size underflow at t = {t} (stiffness failure)")]
    StepSizeUnderflow { t: f64 },

    #[error("state norm underflow at t = {t} (norm {norm:.3e} below the 1e-9 floor)")]
    NormUnderflow { t: f64, norm: f64 },

    #[error("steady state is not unique: bordered-system smallest singular value {sigma_min:.3e} below gap threshold {threshold:.3e}")]
    DegenerateSteadyState { sigma_min: f64, threshold: f64 },

    #[error("steady-state residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("sparse factorization failed: {0}")]
    Factorization(String),

    #[error("bisection bracket [{lo}, {hi}] does not straddle the crossing: f(lo) = {f_lo:.6}, f(hi) = {f_hi:.6}")]
    BracketError { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("observable undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
