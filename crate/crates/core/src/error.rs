use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("defect phase {0} outside [0, 1)")]
    PhaseOutOfRange(f64),

    #[error("defect phase {0} outside the open interval (0, 1)")]
    PhaseOutOfOpenRange(f64),

    #[error("initial coin state not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration budget exceeded: n = {n} (allowed 1..={max})")]
    Budget { n: usize, max: usize },

    #[error("degenerate comparison: {0}")]
    Degenerate(String),

    #[error("boundary parameter: decay rate {0} is not < 1")]
    BoundaryParameter(f64),
}

pub type Result<T> = std::result::Result<T, WalkError>;
