//! Monte Carlo estimation of the restricted smoothness modulus `L_2s`.
//!
//! The gradient of a twice-differentiable objective varies most steeply in
//! some direction; over pairs of `s`-sparse points the steepest ratio is the
//! restricted modulus `L_2s`, which is at most the global Lipschitz constant
//! `L` and often much smaller. The estimator samples sparse points, perturbs
//! them within the sparse set, and takes the largest observed gradient-to-
//! displacement ratio. Its reciprocal is the IHT learning rate.
//!
//! For quadratic objectives the modulus has a closed form per support, so an
//! exhaustive oracle [`exact_l2s_quadratic`] is available to validate the
//! estimator on small problems.

use crate::linalg::{gram, max_eigenvalue, LinalgError, Matrix, Vector};
use crate::objectives::{Objective, ObjectiveError};
use crate::seeds;
use crate::thresholding::{hard_threshold, min_abs_nonzero, support_count};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Displacements below this are treated as a failed draw and retried.
const DENOM_FLOOR: f64 = 1e-12;

/// Fresh-perturbation retries allowed per trial before giving up.
const REDRAW_CAP: usize = 100;

/// Subset-enumeration guard for the exact quadratic oracle.
const ENUMERATION_GUARD: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum RssError {
    #[error("sparsity must satisfy 1 <= s <= {dim}, got s = {s}")]
    SparsityOutOfRange { s: usize, dim: usize },
    #[error("need at least one Monte Carlo trial")]
    NoTrials,
    #[error("trial {trial}: {cap} perturbation re-draws all produced a zero displacement")]
    RedrawCapExhausted { trial: usize, cap: usize },
    #[error("trial {trial}: smoothness ratio is not finite")]
    NonFiniteRatio { trial: usize },
    #[error("smoothness estimate {l_hat} is not a positive finite number")]
    DegenerateEstimate { l_hat: f64 },
    #[error("C({n}, {k}) = {count} subsets exceed the enumeration guard of {guard}; use the Monte Carlo estimator")]
    EnumerationTooLarge {
        n: usize,
        k: usize,
        count: u64,
        guard: u64,
    },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The result of a Monte Carlo smoothness estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct RssEstimate {
    l_hat: f64,
    trials: Vec<f64>,
    s: usize,
}

impl RssEstimate {
    /// The estimate: the largest ratio observed across all trials.
    pub fn l_hat(&self) -> f64 {
        self.l_hat
    }

    /// Per-trial ratios, in trial order.
    pub fn trials(&self) -> &[f64] {
        &self.trials
    }

    pub fn n_monte(&self) -> usize {
        self.trials.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

/// Estimates `L_2s` for `obj` by `n_monte` seeded trials.
///
/// Each trial: draw a standard-normal parameter vector, keep `s` uniformly
/// chosen coordinates, displace it by `delta * d` with `d` standard normal
/// and `delta` the smallest nonzero magnitude, re-threshold to `s` entries,
/// and record the ratio `||grad(moved) - grad(point)|| / ||moved - point||`
/// with the gradient difference measured on the union of the two supports.
/// The restriction matters: the modulus being estimated bounds the objective
/// between sparse points, and only gradient components on the union support
/// enter that bound, so for a quadratic every ratio stays at or below the
/// restricted-Gram eigenvalue oracle while the full-vector difference can
/// overshoot it. The estimate is the maximum ratio. Deterministic for fixed
/// arguments: every trial derives its own RNG stream from `seed`, so
/// extending `n_monte` preserves the earlier trials.
///
/// `s = dim` is the unrestricted mode used to set the dense baseline's
/// learning rate; nothing is zeroed and the threshold is the identity.
pub fn estimate_l2s<O: Objective + ?Sized>(
    obj: &O,
    s: usize,
    n_monte: usize,
    seed: u64,
) -> Result<RssEstimate, RssError> {
    let n = obj.dim();
    if s < 1 || s > n {
        return Err(RssError::SparsityOutOfRange { s, dim: n });
    }
    if n_monte < 1 {
        return Err(RssError::NoTrials);
    }

    let mut trials = Vec::with_capacity(n_monte);
    for trial in 0..n_monte {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::indexed(seed, trial as u64));
        let ratio = run_trial(obj, s, trial, &mut rng)?;
        trials.push(ratio);
    }
    let l_hat = trials.iter().fold(0.0_f64, |a, &b| a.max(b));
    Ok(RssEstimate { l_hat, trials, s })
}

fn run_trial<O: Objective + ?Sized>(
    obj: &O,
    s: usize,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, RssError> {
    let n = obj.dim();
    for _attempt in 0..REDRAW_CAP {
        // Draw a full standard-normal vector and keep s uniformly chosen
        // coordinates. A draw without a usable nonzero entry is retried;
        // standard-normal draws make that a measure-zero event.
        let mut theta = Vector::new(
            (0..n)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect(),
        );
        if s < n {
            let keep = rand::seq::index::sample(rng, n, s);
            let mut mask = vec![false; n];
            for i in keep {
                mask[i] = true;
            }
            for i in 0..n {
                if !mask[i] {
                    theta[i] = 0.0;
                }
            }
        }
        let Ok(delta) = min_abs_nonzero(&theta) else {
            continue;
        };

        let grad_at_theta = obj.gradient(&theta)?;
        for _redraw in 0..REDRAW_CAP {
            let direction = Vector::new(
                (0..n)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect(),
            );
            let moved = hard_threshold(&theta.add_scaled(delta, &direction), s)
                .expect("s validated against dim")
                .into_dense();
            let displacement = moved.sub(&theta).norm();
            if displacement < DENOM_FLOOR {
                continue;
            }
            // The difference is restricted to coordinates live in either
            // point; both supports have at most s entries, so the ratio
            // samples the modulus on a subspace of dimension at most 2s.
            let mut diff = obj.gradient(&moved)?.sub(&grad_at_theta);
            for i in 0..n {
                if theta[i] == 0.0 && moved[i] == 0.0 {
                    diff[i] = 0.0;
                }
            }
            let ratio = diff.norm() / displacement;
            if !ratio.is_finite() {
                return Err(RssError::NonFiniteRatio { trial });
            }
            return Ok(ratio);
        }
        return Err(RssError::RedrawCapExhausted {
            trial,
            cap: REDRAW_CAP,
        });
    }
    Err(RssError::RedrawCapExhausted {
        trial,
        cap: REDRAW_CAP,
    })
}

/// The exact restricted modulus for the quadratic loss `1/2 ||X theta - y||^2`:
/// the largest top eigenvalue of any Gram matrix restricted to at most `k`
/// columns of `X`.
///
/// Enumerates subsets of size exactly `k`; smaller subsets are dominated
/// because a principal submatrix never has a larger top eigenvalue.
pub fn exact_l2s_quadratic(x: &Matrix, k: usize) -> Result<f64, RssError> {
    let n = x.cols();
    if k < 1 || k > n {
        return Err(RssError::SparsityOutOfRange { s: k, dim: n });
    }
    if k == n {
        // Restriction is vacuous: this is the global constant L.
        return Ok(max_eigenvalue(&gram(x)?, 1e-12)?);
    }
    let count = support_count(n as u64, k as u64).map_err(|_| RssError::EnumerationTooLarge {
        n,
        k,
        count: u64::MAX,
        guard: ENUMERATION_GUARD,
    })?;
    if count > ENUMERATION_GUARD {
        return Err(RssError::EnumerationTooLarge {
            n,
            k,
            count,
            guard: ENUMERATION_GUARD,
        });
    }

    let mut best = 0.0_f64;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let restricted = gram(&x.select_columns(&subset))?;
        best = best.max(max_eigenvalue(&restricted, 1e-12)?);

        // Advance to the next k-subset in lexicographic order; the final
        // subset is {n-k, .., n-1}, where every position is maxed out.
        let mut i = k;
        while i > 0 && subset[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return Ok(best);
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// The IHT learning rate `gamma = 1 / l_hat`.
pub fn derive_learning_rate(est: &RssEstimate) -> Result<f64, RssError> {
    if !(est.l_hat > 0.0 && est.l_hat.is_finite()) {
        return Err(RssError::DegenerateEstimate { l_hat: est.l_hat });
    }
    Ok(1.0 / est.l_hat)
}
