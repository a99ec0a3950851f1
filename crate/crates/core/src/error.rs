use thiserror::Error;

/// Errors raised by field arithmetic, cone checks and the lattice sums.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MdzError {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("embedding index {index} out of range for a degree-{degree} field")]
    EmbeddingIndex { index: usize, degree: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("cone is not simple")]
    NotSimple,

    #[error("sector violation: {0}")]
    SectorViolation(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("divergent spec: {0}")]
    Divergent(String),

    #[error("branch cut: {0}")]
    BranchCut(String),

    #[error("invalid shuffle: {0}")]
    InvalidShuffle(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl MdzError {
    /// True for refusals of the evaluation region (as opposed to malformed input).
    pub fn is_precheck_refusal(&self) -> bool {
        matches!(
            self,
            MdzError::Divergent(_)
                | MdzError::BranchCut(_)
                | MdzError::SectorViolation(_)
                | MdzError::Pole(_)
                | MdzError::NotSimple
        )
    }
}

pub type Result<T> = std::result::Result<T, MdzError>;
