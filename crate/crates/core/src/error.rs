use thiserror::Error;

fn dims((r, c): (usize, usize)) -> String {
    format!("{r}x{c}")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{op}: incompatible shapes {} and {}", dims(*.left), dims(*.right))]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix of shape {rows}x{cols} needs {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("matrix of shape {} is not square", dims(*.0))]
    NotSquare((usize, usize)),
    #[error("matrix is singular")]
    Singular,
}

impl AlgebraError {
    pub(crate) fn shape(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Self {
        Self::DimensionMismatch { op, left, right }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("representation `{0}` has no commutant matrices")]
    EmptyCommutant(String),
    #[error("packing `{packing}` targets dimension {packing_dim} but representation `{rep}` has dimension {rep_dim}")]
    DimensionMismatch {
        rep: String,
        rep_dim: usize,
        packing: String,
        packing_dim: usize,
    },
    #[error("projector is not idempotent")]
    NotIdempotent,
}
