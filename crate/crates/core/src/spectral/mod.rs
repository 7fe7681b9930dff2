//! Elliptic vertex operators on patches, exact search for compactly
//! supported eigenfunctions, a floating-point oracle, and the outside-in
//! vanishing trace.

mod cse;
mod factor;
pub mod linalg;
mod numfield;
mod operator;
mod oracle;
pub mod poly;
mod trace;

use thiserror::Error;

use crate::metric::MetricError;
use crate::patch::{PatchError, VertexId};

pub use cse::{cse_search, lambda_roots, verify, Certificate, Lambda};
pub use factor::factor_square_free;
pub use numfield::NumberField;
pub use operator::{EllipticOperator, SupportSet};
pub use oracle::{cse_search_float, FloatCandidate};
pub use trace::{unique_continuation_trace, Elimination, LayerTrace, PropagationTrace, Rule, UcInput};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("insufficient patch radius: vertex {0} in or next to the support is incomplete")]
    Margin(VertexId),
    #[error("entry ({0},{1}) is not on the diagonal or an edge")]
    Pattern(VertexId, VertexId),
    #[error("operator is not elliptic: a({0},{1}) = 0 on an edge")]
    NotElliptic(VertexId, VertexId),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}
