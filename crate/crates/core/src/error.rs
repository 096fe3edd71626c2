use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DacError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parameter {name} = {value} is outside [0, 1]")]
    ParameterRange { name: &'static str, value: String },

    #[error("enumeration cap exceeded: {what} = {count} > {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("geometry mismatch: {0}")]
    Geometry(String),

    #[error("no crossing of 1/2: {0}")]
    NoCrossing(String),

    #[error("polynomial is not monotone: {0}")]
    NonMonotone(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate bisection: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, DacError>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(DacError::ParameterRange {
            name,
            value: value.to_string(),
        })
    }
}
