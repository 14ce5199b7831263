use thiserror::Error;

use crate::algebra::AlgebraTag;
use crate::berry::PointClass;
use crate::jc::SectorReport;

pub type Result<T> = std::result::Result<T, HjcError>;

#[derive(Debug, Clone, Error)]
pub enum HjcError {
    #[error("algebra tag mismatch: {left:?} vs {right:?}")]
    TagMismatch { left: AlgebraTag, right: AlgebraTag },

    #[error("coefficient vector of length {got} does not match {tag:?} (dimension {expected})")]
    CoeffLength {
        tag: AlgebraTag,
        expected: usize,
        got: usize,
    },

    #[error("non-finite coefficient")]
    NonFinite,

    #[error("zero element has no inverse")]
    ZeroInverse,

    #[error("chart {chart} undefined at {class:?} point")]
    DiracString {
        chart: crate::berry::ChartTag,
        class: PointClass,
    },

    #[error("degenerate point r = 0")]
    Origin,

    #[error("w = 0: {0} is undefined on the z-axis")]
    ZeroFiber(&'static str),

    #[error("singular sector (quantum Dirac string) in chart {chart}: {report_summary}")]
    SingularSector {
        chart: crate::berry::ChartTag,
        report_summary: String,
        report: Box<SectorReport>,
    },

    #[error("Fock dimension {0} too small (need at least {1})")]
    Dimension(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("function of N is not finite at level {level}")]
    NonFiniteLevel { level: usize },

    #[error("safe-subspace margin {margin} must be below dimension {dim}")]
    Margin { margin: usize, dim: usize },

    #[error("operator is not diagonal")]
    NotDiagonal,

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("invalid parameters: {0}")]
    Params(String),
}
