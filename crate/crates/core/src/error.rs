use thiserror::Error;

/// Errors raised while building or evaluating concepts.
#[derive(Debug, Error)]
pub enum Error {
    /// Points, cuboids or weights do not line up with a domain structure.
    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid cuboid: {0}")]
    Cuboid(String),

    /// The cuboids of a core have no common point.
    #[error(
        "cuboids have an empty central region: they separate on dimension `{dimension}` \
         (largest lower bound {lower} > smallest upper bound {upper})"
    )]
    EmptyCentralRegion {
        dimension: String,
        lower: f64,
        upper: f64,
    },

    #[error("projection: {0}")]
    Projection(String),

    /// Semantic problem in a space file, anchored to a line when possible.
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Space {
        line: Option<usize>,
        message: String,
    },

    #[error("malformed space file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
