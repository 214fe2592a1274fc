use thiserror::Error;

/// Failure modes shared across the crate. Integer arithmetic is checked
/// everywhere, so overflow surfaces as an error instead of a wrapped value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("matrix ({a} {b}; {c} {d}) has determinant {det}, expected 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64, det: i128 },

    #[error("element has |trace| = {trace}, {needed} required")]
    WrongClass { trace: i128, needed: &'static str },

    #[error("point ({x}, {y}) is not in the upper half-plane")]
    NotInUpperHalfPlane { x: f64, y: f64 },

    #[error("base point is {dist:.3e} away from the axis, must lie on it")]
    OffAxis { dist: f64 },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("window admits no admissible value: {0}")]
    NoAdmissibleValue(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
