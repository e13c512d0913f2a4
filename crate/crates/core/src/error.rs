use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification used by callers that need to map failures onto
/// exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input data.
    Input,
    /// The data is well formed but a theorem hypothesis does not hold.
    Hypothesis,
    /// A numerical procedure failed or produced an invalid metric.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("m must satisfy 1 < m < ∞, got {0}")]
    InvalidM(f64),
    #[error("m = ∞ is the gradient Ricci soliton limit, which is not handled here")]
    InfiniteM,
    #[error("bundle needs at least two factors, got {0}")]
    TooFewFactors(usize),
    #[error("factor {index}: {reason}")]
    InvalidFactor { index: usize, reason: &'static str },
    #[error("sign vector: {0}")]
    InvalidChi(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("shift mismatch: kappa0 {left} vs {right}")]
    KappaMismatch { left: f64, right: f64 },
    #[error("exponent offset mismatch: sigma {left} vs {right}")]
    SigmaMismatch { left: f64, right: f64 },
    #[error("antiderivative hits exponent -1 at degree {degree}")]
    LogarithmicTerm { degree: usize },
    #[error("E* = {e_star} outside the admissible window: {reason}")]
    EStarWindow { e_star: f64, reason: &'static str },
    #[error("negative discriminant {discriminant} in A-coefficient{}", factor_suffix(*.factor))]
    NegativeDiscriminant {
        factor: Option<usize>,
        discriminant: f64,
    },
    #[error("beta_{} is not positive at s = {s}", .index + 1)]
    BetaNotPositive { index: usize, s: f64 },
    #[error("alpha is not positive at s = {s}")]
    AlphaNotPositive { s: f64 },
    #[error("closing integral does not change sign on [{lo}, {hi}] (signs {sign_lo}, {sign_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        sign_lo: i8,
        sign_hi: i8,
    },
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },
    #[error("operation requires {expected} profile")]
    WrongCase { expected: &'static str },
    #[error("s = {s} lies outside the profile domain")]
    OutOfDomain { s: f64 },
    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { got: usize, min: usize },
    #[error("non-finite value while evaluating {0}")]
    NonFinite(&'static str),
}

fn factor_suffix(factor: Option<usize>) -> String {
    match factor {
        Some(i) => alloc::format!(" for factor {}", i + 1),
        None => String::new(),
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidM(_)
            | Error::InfiniteM
            | Error::TooFewFactors(_)
            | Error::InvalidFactor { .. }
            | Error::InvalidChi(_)
            | Error::KappaMismatch { .. }
            | Error::SigmaMismatch { .. }
            | Error::WrongCase { .. }
            | Error::GridTooSmall { .. }
            | Error::OutOfDomain { .. } => ErrorKind::Input,
            Error::Hypothesis(_) | Error::EStarWindow { .. } | Error::NoSignChange { .. } => {
                ErrorKind::Hypothesis
            }
            Error::LogarithmicTerm { .. }
            | Error::NegativeDiscriminant { .. }
            | Error::BetaNotPositive { .. }
            | Error::AlphaNotPositive { .. }
            | Error::Quadrature { .. }
            | Error::NonFinite(_) => ErrorKind::Numerical,
        }
    }

    pub(crate) fn at_factor(self, index: usize) -> Self {
        match self {
            Error::NegativeDiscriminant { discriminant, .. } => Error::NegativeDiscriminant {
                factor: Some(index),
                discriminant,
            },
            other => other,
        }
    }
}

pub(crate) fn check_m(m: f64) -> Result<()> {
    if m == f64::INFINITY {
        return Err(Error::InfiniteM);
    }
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::InvalidM(m));
    }
    Ok(())
}
