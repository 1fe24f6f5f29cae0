use thiserror::Error;

/// Errors shared by the whole engine.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    #[error("point {point:?} lies outside the chart domain of `{chart}`")]
    OutOfDomain { chart: String, point: Vec<f64> },

    #[error("metric is not positive definite at {point:?} (Cholesky pivot {pivot:.3e} at index {index})")]
    NotSpd {
        point: Vec<f64>,
        pivot: f64,
        index: usize,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("subspace dimensions ({horizontal}, {vertical}) are not (even, even+1)")]
    OddDimensionMismatch { horizontal: usize, vertical: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("differential is rank deficient at {point:?} (rank {rank}, expected {expected})")]
    RankDeficient {
        point: Vec<f64>,
        rank: usize,
        expected: usize,
    },

    #[error("missing structure: {0}")]
    MissingStructure(&'static str),

    #[error("frame base point {frame_point:?} differs from evaluation point {point:?}")]
    FrameMismatch {
        frame_point: Vec<f64>,
        point: Vec<f64>,
    },

    #[error("vector is not vertical (horizontal norm {hnorm:.3e})")]
    NotVertical { hnorm: f64 },

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("catalog construction failed self-verification: {0}")]
    ConstructionInvalid(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("check `{check}` is not applicable to example `{example}`: {reason}")]
    CheckNotApplicable {
        check: String,
        example: String,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, GeomError>;
