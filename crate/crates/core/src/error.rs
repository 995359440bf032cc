use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph has {0} edges, at most 64 are supported")]
    TooManyEdges(usize),

    #[error("edge set is not a forest")]
    NotAForest,

    #[error("invalid ordered partition: {0}")]
    InvalidPartition(String),

    #[error("genus {0} is out of range")]
    GenusOutOfRange(usize),

    #[error("edge set is not the first block of the filtration")]
    NotFirstBlock,

    #[error("automorphism does not belong to the group of the filtered graph")]
    NotAnAutomorphism,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("Burnside average is not integral in degree {degree}: {sum} / {order}")]
    NonIntegralBurnside { degree: usize, sum: i64, order: usize },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("boundary of boundary is nonzero: cell {cell} in dimension {dim} reaches cell {face} of dimension {face_dim}")]
    BoundarySquareNonzero {
        dim: usize,
        cell: usize,
        face_dim: usize,
        face: usize,
    },

    #[error("cell count mismatch in dimension {dim}: {left} vs {right}")]
    CountMismatch { dim: usize, left: i64, right: i64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors that signal a bug in the computation rather than bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::NonIntegralBurnside { .. }
                | Error::BoundarySquareNonzero { .. }
                | Error::CountMismatch { .. }
                | Error::Consistency(_)
                | Error::Overflow(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
