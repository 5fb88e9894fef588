//! The iterative-hard-thresholding loop and its dense gradient-descent
//! counterpart.
//!
//! Both methods share the stopping rules (target loss reached, or a step
//! cap) and the per-step trace. IHT applies `H_s` after every gradient step,
//! so each iterate satisfies the sparsity budget exactly.

use crate::linalg::Vector;
use crate::objectives::{Objective, ObjectiveError};
use crate::thresholding::{hard_threshold, SparseVector, Support, ThresholdingError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OptimError {
    #[error("learning rate must be positive and finite, got {got}")]
    BadLearningRate { got: f64 },
    #[error("sparsity must satisfy 1 <= s < {dim}, got s = {s}")]
    SparsityOutOfRange { s: usize, dim: usize },
    #[error("max_steps must be at least 1")]
    NoSteps,
    #[error("initial point has dimension {got}, objective expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial point has {nonzeros} nonzeros, budget is s = {s}")]
    InfeasibleStart { nonzeros: usize, s: usize },
    #[error("non-finite loss or gradient at step {step}")]
    Diverged { step: usize },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Thresholding(#[from] ThresholdingError),
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The loss fell to or below the configured target.
    LossStop,
    /// The step cap was reached first.
    MaxSteps,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::LossStop => "loss_stop",
            StopReason::MaxSteps => "max_steps",
        })
    }
}

/// Settings for an IHT run.
#[derive(Debug, Clone, PartialEq)]
pub struct IhtConfig {
    pub s: usize,
    pub gamma: f64,
    pub max_steps: usize,
    pub loss_stop: f64,
    /// Record every k-th iterate in the trace; 0 records only the last.
    pub trace_every: usize,
}

impl IhtConfig {
    /// Defaults: 10,000 steps, stop at loss 0.05, trace every iterate.
    pub fn new(s: usize, gamma: f64) -> Self {
        IhtConfig {
            s,
            gamma,
            max_steps: 10_000,
            loss_stop: 0.05,
            trace_every: 1,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// A non-positive target never triggers for the non-negative losses in
    /// this crate, which disables early stopping.
    pub fn with_loss_stop(mut self, loss_stop: f64) -> Self {
        self.loss_stop = loss_stop;
        self
    }

    pub fn with_trace_every(mut self, trace_every: usize) -> Self {
        self.trace_every = trace_every;
        self
    }

    fn validate(&self, dim: usize) -> Result<(), OptimError> {
        if self.s < 1 || self.s >= dim {
            return Err(OptimError::SparsityOutOfRange { s: self.s, dim });
        }
        check_common(self.gamma, self.max_steps)
    }
}

/// Settings for a dense gradient-descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct GdConfig {
    pub gamma: f64,
    pub max_steps: usize,
    pub loss_stop: f64,
    pub trace_every: usize,
}

impl GdConfig {
    pub fn new(gamma: f64) -> Self {
        GdConfig {
            gamma,
            max_steps: 10_000,
            loss_stop: 0.05,
            trace_every: 1,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_loss_stop(mut self, loss_stop: f64) -> Self {
        self.loss_stop = loss_stop;
        self
    }

    pub fn with_trace_every(mut self, trace_every: usize) -> Self {
        self.trace_every = trace_every;
        self
    }

    fn validate(&self) -> Result<(), OptimError> {
        check_common(self.gamma, self.max_steps)
    }
}

fn check_common(gamma: f64, max_steps: usize) -> Result<(), OptimError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(OptimError::BadLearningRate { got: gamma });
    }
    if max_steps < 1 {
        return Err(OptimError::NoSteps);
    }
    Ok(())
}

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub loss: f64,
    pub grad_norm: f64,
    pub support: Support,
    /// Whether the support differs from the previous iterate's.
    pub support_changed: bool,
}

/// The recorded history of a run plus its terminal state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    steps: Vec<TraceStep>,
    stop_reason: StopReason,
    steps_taken: usize,
    final_loss: f64,
    final_gradient: Vector,
}

impl Trace {
    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop_reason
    }

    /// Number of update steps applied (the final iterate's index).
    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn final_loss(&self) -> f64 {
        self.final_loss
    }

    pub fn final_gradient(&self) -> &Vector {
        &self.final_gradient
    }
}

/// The step map applied between loss evaluations.
enum Update {
    Threshold { s: usize, gamma: f64 },
    Plain { gamma: f64 },
}

fn run_loop<O: Objective + ?Sized>(
    obj: &O,
    theta0: Vector,
    update: Update,
    max_steps: usize,
    loss_stop: f64,
    trace_every: usize,
) -> Result<(Vector, Trace), OptimError> {
    if theta0.dim() != obj.dim() {
        return Err(OptimError::DimensionMismatch {
            expected: obj.dim(),
            got: theta0.dim(),
        });
    }

    let mut theta = theta0;
    let mut steps = Vec::new();
    let mut prev_support: Option<Support> = None;
    let mut step = 0usize;
    loop {
        let (loss, grad) = obj.value_grad(&theta)?;
        if !loss.is_finite() || !grad.is_finite() {
            return Err(OptimError::Diverged { step });
        }
        let stopping = loss <= loss_stop || step == max_steps;
        let support = Support::of_vector(&theta);
        if stopping || (trace_every > 0 && step % trace_every == 0) {
            steps.push(TraceStep {
                step,
                loss,
                grad_norm: grad.norm(),
                support: support.clone(),
                support_changed: prev_support.as_ref().is_some_and(|p| *p != support),
            });
        } else if let Some(last) = steps.last_mut() {
            // Keep the flag meaningful under sparse tracing: mark the last
            // recorded row if the support moved anywhere since it.
            if prev_support.as_ref().is_some_and(|p| *p != support) {
                last.support_changed = true;
            }
        }
        prev_support = Some(support);

        if stopping {
            let stop_reason = if loss <= loss_stop {
                StopReason::LossStop
            } else {
                StopReason::MaxSteps
            };
            let trace = Trace {
                steps,
                stop_reason,
                steps_taken: step,
                final_loss: loss,
                final_gradient: grad,
            };
            return Ok((theta, trace));
        }

        let moved = match update {
            Update::Threshold { s, gamma } => {
                hard_threshold(&theta.add_scaled(-gamma, &grad), s)?.into_dense()
            }
            Update::Plain { gamma } => theta.add_scaled(-gamma, &grad),
        };
        theta = moved;
        step += 1;
    }
}

/// Runs IHT from a feasible start: repeat `theta <- H_s(theta - gamma grad)`
/// until the loss target or the step cap is hit.
pub fn iht_run<O: Objective + ?Sized>(
    obj: &O,
    theta0: &SparseVector,
    cfg: &IhtConfig,
) -> Result<(SparseVector, Trace), OptimError> {
    cfg.validate(obj.dim())?;
    if theta0.support().len() > cfg.s {
        return Err(OptimError::InfeasibleStart {
            nonzeros: theta0.support().len(),
            s: cfg.s,
        });
    }
    let (theta, trace) = run_loop(
        obj,
        theta0.dense().clone(),
        Update::Threshold {
            s: cfg.s,
            gamma: cfg.gamma,
        },
        cfg.max_steps,
        cfg.loss_stop,
        cfg.trace_every,
    )?;
    let sparse = SparseVector::from_dense(theta, cfg.s)?;
    Ok((sparse, trace))
}

/// Runs plain gradient descent: `theta <- theta - gamma grad`, same stopping
/// rules as IHT. Trains the dense baseline.
pub fn gd_run<O: Objective + ?Sized>(
    obj: &O,
    theta0: &Vector,
    cfg: &GdConfig,
) -> Result<(Vector, Trace), OptimError> {
    cfg.validate()?;
    run_loop(
        obj,
        theta0.clone(),
        Update::Plain { gamma: cfg.gamma },
        cfg.max_steps,
        cfg.loss_stop,
        cfg.trace_every,
    )
}
