use std::path::PathBuf;

use thiserror::Error;

/// Failures while reading a TSPLIB file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header entry `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("missing required keyword {0}")]
    MissingKeyword(&'static str),
    #[error("unsupported EDGE_WEIGHT_TYPE `{0}` (only EUC_2D is supported)")]
    UnsupportedEdgeWeightType(String),
    #[error("unsupported TYPE `{0}` (only TSP is supported)")]
    UnsupportedProblemType(String),
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("line {line}: malformed node line `{text}`")]
    MalformedNode { line: usize, text: String },
    #[error("node id {id} is outside 1..={dimension}")]
    NodeIdOutOfRange { id: usize, dimension: usize },
    #[error("node id {0} appears more than once")]
    DuplicateNode(usize),
    #[error("node id {0} is missing from NODE_COORD_SECTION")]
    MissingNode(usize),
    #[error("DIMENSION is {declared} but NODE_COORD_SECTION lists {found} nodes")]
    DimensionMismatch { declared: usize, found: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("city id {id} is outside 1..={dimension}")]
    CityOutOfRange { id: usize, dimension: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not a permutation of 1..={dimension}: {reason}")]
    InvalidPermutation { dimension: usize, reason: String },

    #[error("target dimension {target} is outside 1..={source_dim}")]
    ProjectionOutOfRange { target: usize, source_dim: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("evaluation budget {budget} cannot cover the {required} initial evaluations")]
    BudgetTooSmall { budget: u64, required: u64 },

    #[error("at least {required} tasks are required, got {actual}")]
    TooFewTasks { required: usize, actual: usize },

    #[error(
        "deme {deme} has {size} bats; migration needs {protected} elites plus two replaceable bats"
    )]
    DemeTooSmall {
        deme: usize,
        size: usize,
        protected: usize,
    },

    #[error("empty sample")]
    EmptySample,

    #[error("empty population")]
    EmptyPopulation,

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("unknown solver `{0}` (expected coeba or mfea)")]
    UnknownSolver(String),

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    #[error("{0}")]
    Comparison(String),

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Format {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
