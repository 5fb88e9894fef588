//! Sparse model training with iterative hard thresholding (IHT).
//!
//! The crate trains models under an explicit L0 budget: at most `s` of the
//! `n` parameters may be nonzero. The pieces fit together as a pipeline:
//!
//! * [`thresholding`] — the hard-thresholding operator `H_s` and support-set
//!   bookkeeping.
//! * [`objectives`] — differentiable objectives (least squares, one-layer
//!   softmax classifier) with analytic gradients and a finite-difference
//!   checker.
//! * [`rss`] — Monte Carlo estimation of the restricted smoothness modulus
//!   `L_2s`, which sets the IHT learning rate `gamma = 1 / L_2s`.
//! * [`optim`] — the IHT iteration and a plain gradient-descent baseline,
//!   both with stopping rules and per-step traces.
//! * [`stability`] — certification that a trained sparse point is HT-stable,
//!   and the epsilon-optimality comparison against a dense baseline.
//! * [`data`] / [`experiments`] — IRIS ingestion and the seeded experiment
//!   harness that sweeps sparsity levels and aggregates results.
//!
//! The narrative guide in `book/` walks through each concept; its code
//! snippets are compiled and run as doc-tests from this crate.

pub mod data;
pub mod experiments;
pub mod linalg;
pub mod objectives;
pub mod optim;
pub mod report;
pub mod rss;
pub(crate) mod seeds;
pub mod stability;
pub mod thresholding;

#[cfg(doctest)]
mod book;

pub use linalg::{Matrix, Vector};
pub use thresholding::{hard_threshold, SparseVector, Support};
