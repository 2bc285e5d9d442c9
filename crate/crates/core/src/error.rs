use thiserror::Error;

use crate::point::C2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero: denominator vanishes at {0}")]
    DivisionByZero(C2),
    #[error("division by the zero rational expression")]
    ZeroDivisor,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid defining function: {0}")]
    InvalidDomain(String),
    #[error("singular frame at {point} (condition number {condition:.3e})")]
    SingularFrame { point: C2, condition: f64 },
    #[error("type exceeds k_max = {k_max} at {point}")]
    TypeExceedsKmax { point: C2, k_max: usize },
    #[error("outside chart: {0}")]
    OutsideChart(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("no certified zero near {center}: {reason}")]
    NoCertifiedZero { center: C2, reason: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Chart and singularity failures, as opposed to usage errors.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero(_)
                | Error::SingularFrame { .. }
                | Error::OutsideChart(_)
                | Error::Singular(_)
                | Error::NoCertifiedZero { .. }
                | Error::TypeExceedsKmax { .. }
        )
    }
}
