use crate::model::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("free vertex {vertex}: {reason}")]
    InvalidAdjacency { vertex: usize, reason: String },

    #[error("not a permutation of 0..{n}: {reason}")]
    InvalidOrdering { n: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("crossing matrix has a nonzero diagonal entry at {0}")]
    NonZeroDiagonal(usize),

    #[error("pair crossings requested for a vertex with itself ({0})")]
    SameVertex(usize),

    #[error("free vertex {0} has no neighbors")]
    IsolatedVertex(usize),

    #[error("score of vertex {vertex} is not finite")]
    NonFiniteScore { vertex: usize },

    #[error("fractional value {value} for pair ({u}, {v}) is outside [0, 1]")]
    ValueOutOfRange { u: usize, v: usize, value: f64 },

    #[error("fixing {before} before {after} contradicts an earlier fix")]
    FixConflict { before: usize, after: usize },

    #[error("fixed orientations contain the directed cycle {0} -> {1} -> {2} -> {0}")]
    CyclicFixes(usize, usize, usize),

    #[error("lower bound {lb} exceeds incumbent cost {ub}")]
    BoundAboveIncumbent { lb: u64, ub: u64 },

    #[error("integral LP solution does not encode a total order (score tie at {0})")]
    InconsistentIntegral(usize),

    #[error("fractional solution has no fractional column to branch on")]
    NothingToBranch,

    #[error("instance has {n1} free vertices; brute force supports at most {max}")]
    TooLarge { n1: usize, max: usize },

    #[error("LP solver failed: {0}")]
    Lp(#[from] crate::lp::LpError),
}
