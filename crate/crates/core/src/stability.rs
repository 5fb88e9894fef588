//! Certification that a sparse point is stable under the IHT map, plus the
//! loss-closeness test against a dense baseline.
//!
//! A sparse point survives one thresholded gradient step unchanged exactly
//! when its smallest kept magnitude beats the learning rate times the
//! largest gradient entry outside the support. The margin between the two
//! sides quantifies how comfortably the certificate holds.

use crate::linalg::Vector;
use crate::thresholding::SparseVector;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StabilityError {
    #[error("cannot certify a point with an empty support")]
    EmptySupport,
    #[error("learning rate must be positive and finite, got {got}")]
    BadLearningRate { got: f64 },
    #[error("gradient has dimension {got}, the point has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Both sides of the stability inequality and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub min_abs_on_support: f64,
    pub max_grad_off_support: f64,
    pub gamma: f64,
    /// `min_abs_on_support - gamma * max_grad_off_support`.
    pub margin: f64,
    pub is_stable: bool,
}

/// Evaluates the stability inequality at a sparse point with its gradient.
///
/// When the support complement is empty the off-support side is zero, so any
/// point with a nonzero entry certifies.
pub fn check_ht_stable(
    point: &SparseVector,
    grad: &Vector,
    gamma: f64,
) -> Result<StabilityReport, StabilityError> {
    if point.support().is_empty() {
        return Err(StabilityError::EmptySupport);
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(StabilityError::BadLearningRate { got: gamma });
    }
    if grad.dim() != point.dense().dim() {
        return Err(StabilityError::DimensionMismatch {
            expected: point.dense().dim(),
            got: grad.dim(),
        });
    }

    let min_abs_on_support = point
        .support()
        .iter()
        .map(|i| point.dense()[i].abs())
        .fold(f64::INFINITY, f64::min);
    let max_grad_off_support = (0..grad.dim())
        .filter(|&j| !point.support().contains(j))
        .map(|j| grad[j].abs())
        .fold(0.0_f64, f64::max);
    let margin = min_abs_on_support - gamma * max_grad_off_support;
    Ok(StabilityReport {
        min_abs_on_support,
        max_grad_off_support,
        gamma,
        margin,
        is_stable: margin >= 0.0,
    })
}

/// Whether the sparse loss is within `eps` of the dense baseline's loss.
pub fn check_eps_optimality(loss_dense: f64, loss_sparse: f64, eps: f64) -> bool {
    loss_sparse <= loss_dense + eps
}
