//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building expansions, intervals or
/// coverage reports.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A variance (second cumulant) was zero, negative or non-finite.
    NonPositiveVariance(f64),
    /// Fewer cumulants are available than the requested expansion order needs.
    InsufficientCumulants { needed: usize, available: usize },
    /// An expansion/correction order outside the supported range.
    OrderOutOfRange { what: &'static str, value: u32, max: u32 },
    /// Mismatched lengths in a weighted polynomial combination.
    LengthMismatch { weights: usize, polys: usize },
    /// A parameter or argument fell outside the model's domain.
    Domain(String),
    /// Standardized cumulants vary with the parameter where the chosen
    /// method requires them constant.
    ThetaDependentCumulants { order: u32, relative_spread: f64 },
    /// The pivot is not monotone in the parameter over the probed range.
    NonMonotonePivot,
    /// Root bracketing failed inside the parameter domain.
    BracketNotFound { target: f64 },
    /// A transformed value left the range of the mean map; carries the tail
    /// point whose endpoint failed.
    OutOfRange { what: &'static str, tail: f64, value: f64 },
    /// A finite-difference stencil would leave the domain.
    StencilFailure { t: f64 },
    /// The interval factor `N_nj` went nonpositive (series truncation).
    Truncation { n_factor: f64 },
    /// Invalid experiment / confidence specification.
    InvalidSpec(String),
    /// Too many replications failed during a coverage run.
    ReplicationFailures { failed: u64, total: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveVariance(v) => {
                write!(f, "second cumulant must be positive and finite, got {v}")
            }
            Error::InsufficientCumulants { needed, available } => write!(
                f,
                "expansion needs cumulants through order {needed}, only {available} available"
            ),
            Error::OrderOutOfRange { what, value, max } => {
                write!(f, "{what} = {value} outside supported range 0..={max}")
            }
            Error::LengthMismatch { weights, polys } => {
                write!(f, "combine needs equal lengths, got {weights} weights and {polys} polynomials")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ThetaDependentCumulants { order, relative_spread } => write!(
                f,
                "standardized cumulant l_{order} varies with the parameter \
                 (relative spread {relative_spread:.3e}); method requires constant cumulants"
            ),
            Error::NonMonotonePivot => write!(f, "pivot is not monotone in the parameter"),
            Error::BracketNotFound { target } => {
                write!(f, "could not bracket a root for target {target}")
            }
            Error::OutOfRange { what, tail, value } => write!(
                f,
                "{what} = {value} outside the range of the mean map (tail point x = {tail})"
            ),
            Error::StencilFailure { t } => {
                write!(f, "derivative stencil leaves the domain near t = {t}")
            }
            Error::Truncation { n_factor } => {
                write!(f, "interval factor went nonpositive ({n_factor}); series truncated")
            }
            Error::InvalidSpec(msg) => write!(f, "invalid specification: {msg}"),
            Error::ReplicationFailures { failed, total } => {
                write!(f, "{failed} of {total} replications failed (> 1% tolerated)")
            }
        }
    }
}

impl std::error::Error for Error {}
