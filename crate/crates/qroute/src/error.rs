use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("graph is disconnected: no path from vertex {0} to vertex {1}")]
    Disconnected(usize, usize),

    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("gate pair ({0}, {0}) uses the same token twice")]
    SelfPair(usize),

    #[error("layer {0} admits no feasible allocation on this hardware graph")]
    InfeasibleLayer(usize),

    #[error("no transition into layer {0} satisfies the distance limit")]
    DistanceLimitInfeasible(usize),

    #[error("hardware graph has no {want} vertex-disjoint edges")]
    NoMatching { want: usize },

    #[error("vertex set is not independent: {0} and {1} are adjacent")]
    NotIndependent(usize, usize),

    #[error("instance too large for brute force: {n} vertices exceeds guard of {guard}")]
    BruteForceGuard { n: usize, guard: usize },

    #[error("circuit uses {tokens} tokens but the hardware graph has only {vertices} vertices")]
    TooManyTokens { tokens: usize, vertices: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
