use thiserror::Error;

use crate::set::NeuronSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("neuron {label} is out of range for n={n}")]
    NeuronOutOfRange { label: usize, n: usize },

    #[error("at most {max} neurons are supported, got n={n}")]
    TooManyNeurons { n: usize, max: usize },

    #[error("the empty codeword is missing; codes must contain the empty set")]
    MissingEmptyCodeword,

    #[error("{what}: n={n} exceeds the configured cap of {cap}")]
    LimitExceeded { what: &'static str, n: usize, cap: usize },

    #[error("canonical form is not degree two: {witness} has degree {degree}")]
    NotDegreeTwo { witness: String, degree: u32 },

    #[error("containment relation is not a partial order: {0}")]
    OrderAxiomViolation(String),

    #[error("vertex sequence is not a perfect elimination order: {0}")]
    InvalidPeo(String),

    #[error("{0} is not a clique of the relationship graph")]
    NotAClique(NeuronSet),

    #[error("code is not splittable")]
    NotSplittable,

    #[error("code is not inductively pierced")]
    NotPierced,

    #[error("internal consistency check failed: {0}")]
    ConsistencyFailure(String),

    #[error("replay does not reproduce the code: {0}")]
    ReplayMismatch(String),

    #[error("dimension {dim} is too small: {reason}")]
    DimensionTooSmall { dim: usize, min: usize, reason: String },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("no pierceable point found for {0}")]
    NoPointFound(String),

    #[error("radius {radius:e} underflows the minimum of {min:e}")]
    RadiusUnderflow { radius: f64, min: f64 },

    #[error("rendering requires dimension 2, got {0}")]
    UnsupportedDimension(usize),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
