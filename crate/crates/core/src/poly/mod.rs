//! Exact univariate and sparse multivariate polynomials over the rationals.

mod multi;
mod uni;

pub use multi::{Monomial, MultiPoly};
pub use uni::UniPoly;

use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("parse error: {0}")]
    Parse(#[from] ExprError),
    #[error("{0}")]
    Unsupported(String),
}
