use thiserror::Error;

/// Everything that can go wrong in the core library.
///
/// Parse errors and anomalies (an instance on which a proven result appears
/// to fail) get their own CLI exit codes; every other variant is a
/// precondition violation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arc ({u}, {v}) is a loop")]
    LoopArc { u: usize, v: usize },
    #[error("arc ({u}, {v}) has an endpoint outside 0..{n}")]
    ArcOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("k = {k} is below the minimum {min} for this operation")]
    KTooSmall { k: usize, min: usize },
    #[error("outer digraph has {t} vertices, a composition needs at least 2")]
    TooFewOuterVertices { t: usize },
    #[error("outer digraph has {outer} vertices but {factors} factors were given")]
    FactorCountMismatch { outer: usize, factors: usize },
    #[error("factor {index} is empty")]
    EmptyFactor { index: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("oracle refuses {n} vertices (cap is {cap})")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("generator gave up after {attempts} attempts: {spec}")]
    RetryCapExhausted { attempts: usize, spec: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("anomaly: {0}")]
    Anomaly(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_anomaly(&self) -> bool {
        matches!(self, Error::Anomaly(_))
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
