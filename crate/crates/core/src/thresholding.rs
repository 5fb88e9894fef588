//! The hard-thresholding operator `H_s` and support-set bookkeeping.
//!
//! `H_s` keeps the `s` largest-magnitude entries of a vector and zeroes the
//! rest, which makes it the projection onto the set `{z : ||z||_0 <= s}`.
//! Ties are broken toward the smaller index so that repeated runs of a
//! seeded experiment produce identical iterates.

use crate::linalg::Vector;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ThresholdingError {
    #[error("sparsity budget must satisfy 1 <= s <= {dim}, got s = {s}")]
    BudgetOutOfRange { s: usize, dim: usize },
    #[error("support count requires 1 <= s < n, got n = {n}, s = {s}")]
    CountOutOfRange { n: u64, s: u64 },
    #[error("binomial coefficient C({n}, {s}) exceeds the 64-bit range")]
    CountOverflow { n: u64, s: u64 },
    #[error("no nonzero entries: the vector is identically zero")]
    AllZero,
    #[error("support indices must be strictly increasing")]
    UnsortedSupport,
    #[error("vector has {nonzeros} nonzero entries, more than the budget s = {s}")]
    BudgetExceeded { nonzeros: usize, s: usize },
}

/// A set of coordinate indices, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    indices: Vec<usize>,
}

impl Support {
    /// Wraps an index list, which must already be strictly increasing.
    pub fn new(indices: Vec<usize>) -> Result<Self, ThresholdingError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ThresholdingError::UnsortedSupport);
        }
        Ok(Support { indices })
    }

    /// The indices of the nonzero entries of `v`.
    pub fn of_vector(v: &Vector) -> Self {
        Support {
            indices: (0..v.dim()).filter(|&i| v[i] != 0.0).collect(),
        }
    }

    pub fn empty() -> Self {
        Support { indices: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, usize>> {
        self.indices.iter().copied()
    }
}

/// A dense vector together with its support and an L0 budget `s`.
///
/// Invariants: the vector is zero off `support`, and `|support| <= s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dense: Vector,
    support: Support,
    budget: usize,
}

impl SparseVector {
    /// Validates that `dense` has at most `budget` nonzeros and records its
    /// natural support.
    pub fn from_dense(dense: Vector, budget: usize) -> Result<Self, ThresholdingError> {
        if budget < 1 || budget > dense.dim() {
            return Err(ThresholdingError::BudgetOutOfRange {
                s: budget,
                dim: dense.dim(),
            });
        }
        let support = Support::of_vector(&dense);
        if support.len() > budget {
            return Err(ThresholdingError::BudgetExceeded {
                nonzeros: support.len(),
                s: budget,
            });
        }
        Ok(SparseVector {
            dense,
            support,
            budget,
        })
    }

    pub fn dense(&self) -> &Vector {
        &self.dense
    }

    pub fn into_dense(self) -> Vector {
        self.dense
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// `H_s(v)`: keep the `s` largest-magnitude entries, zero the rest.
///
/// On equal magnitudes the smaller index wins. A vector with fewer than `s`
/// nonzeros passes through unchanged, since it already satisfies the budget.
pub fn hard_threshold(v: &Vector, s: usize) -> Result<SparseVector, ThresholdingError> {
    if s < 1 || s > v.dim() {
        return Err(ThresholdingError::BudgetOutOfRange { s, dim: v.dim() });
    }
    let mut order: Vec<usize> = (0..v.dim()).collect();
    // Sort by magnitude descending; the index itself is the tie-break and the
    // sort is stable, so equal magnitudes keep their original (ascending)
    // index order.
    order.sort_by(|&a, &b| v[b].abs().partial_cmp(&v[a].abs()).expect("finite entries"));
    let mut out = Vector::zeros(v.dim());
    for &i in order.iter().take(s) {
        out[i] = v[i];
    }
    SparseVector::from_dense(out, s)
}

/// The number of supports of size exactly `s` in `n` coordinates: `C(n, s)`
/// in exact integer arithmetic.
pub fn support_count(n: u64, s: u64) -> Result<u64, ThresholdingError> {
    if s < 1 || s >= n {
        return Err(ThresholdingError::CountOutOfRange { n, s });
    }
    let k = s.min(n - s);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is divisible by i at every step, so the division
        // is exact.
        acc = acc
            .checked_mul((n - k + i) as u128)
            .ok_or(ThresholdingError::CountOverflow { n, s })?
            / i as u128;
        if acc > u64::MAX as u128 {
            return Err(ThresholdingError::CountOverflow { n, s });
        }
    }
    Ok(acc as u64)
}

/// The smallest absolute value among the nonzero entries of `v`.
pub fn min_abs_nonzero(v: &Vector) -> Result<f64, ThresholdingError> {
    v.iter()
        .filter(|&&x| x != 0.0)
        .map(|x| x.abs())
        .min_by(|a, b| a.partial_cmp(b).expect("finite entries"))
        .ok_or(ThresholdingError::AllZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(data: &[f64]) -> Vector {
        Vector::new(data.to_vec())
    }

    /// Squared distance from `v` to the best `||z||_0 <= s` approximation
    /// over an explicit support mask: copy coordinates on the mask, zero off
    /// it, so the cost is the off-mask energy.
    fn best_approx_error_sq(v: &Vector, s: usize) -> f64 {
        let n = v.dim();
        assert!(n <= 16, "enumeration oracle is exponential in n");
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize > s {
                continue;
            }
            let off_energy: f64 = (0..n)
                .filter(|i| mask & (1 << i) == 0)
                .map(|i| v[i] * v[i])
                .sum();
            best = best.min(off_energy);
        }
        best
    }

    #[test]
    fn keeps_two_largest_with_smaller_index_tie_break() {
        let out = hard_threshold(&v(&[1.0, -3.0, 1.0]), 2).unwrap();
        assert_eq!(out.dense().as_slice(), &[1.0, -3.0, 0.0]);
        assert_eq!(out.support().indices(), &[0, 1]);
    }

    #[test]
    fn vector_within_budget_is_unchanged() {
        let input = v(&[0.0, 2.0, 0.0, -1.0, 0.0]);
        let out = hard_threshold(&input, 3).unwrap();
        assert_eq!(out.dense(), &input);
        assert_eq!(out.support().indices(), &[1, 3]);
    }

    #[test]
    fn keeps_unique_max_magnitude() {
        let out = hard_threshold(&v(&[2.0, -5.0, 4.0]), 1).unwrap();
        assert_eq!(out.dense().as_slice(), &[0.0, -5.0, 0.0]);
    }

    #[test]
    fn rejects_budget_out_of_range() {
        assert_eq!(
            hard_threshold(&v(&[1.0, 2.0]), 0).unwrap_err(),
            ThresholdingError::BudgetOutOfRange { s: 0, dim: 2 }
        );
        assert_eq!(
            hard_threshold(&v(&[1.0, 2.0]), 3).unwrap_err(),
            ThresholdingError::BudgetOutOfRange { s: 3, dim: 2 }
        );
    }

    #[test]
    fn is_best_s_term_approximation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=10usize {
            for _ in 0..20 {
                let x = Vector::new((0..n).map(|_| rng.random_range(-3.0..3.0)).collect());
                for s in 1..=n {
                    let kept = hard_threshold(&x, s).unwrap();
                    let err_sq = x.sub(kept.dense()).norm().powi(2);
                    let oracle = best_approx_error_sq(&x, s);
                    assert!(
                        err_sq <= oracle + 1e-12,
                        "n={n} s={s}: H_s error {err_sq} worse than enumerated {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_of_support_counts_for_fifteen_coordinates() {
        let expected = [
            15u64, 105, 455, 1365, 3003, 5005, 6435, 6435, 5005, 3003, 1365, 455, 105, 15,
        ];
        for (s, &want) in (1..=14u64).zip(&expected) {
            assert_eq!(support_count(15, s).unwrap(), want, "C(15, {s})");
        }
    }

    #[test]
    fn support_count_matches_pascal_triangle() {
        let mut row: Vec<u128> = vec![1];
        for n in 1..=40u64 {
            let mut next = vec![1u128; n as usize + 1];
            for i in 1..n as usize {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
            for s in 1..n {
                assert_eq!(support_count(n, s).unwrap() as u128, row[s as usize]);
            }
        }
    }

    #[test]
    fn support_count_symmetry() {
        for n in 2..=30u64 {
            for s in 1..n {
                assert_eq!(support_count(n, s), support_count(n, n - s));
            }
        }
    }

    #[test]
    fn support_count_rejects_bad_range_and_overflow() {
        assert_eq!(
            support_count(5, 0).unwrap_err(),
            ThresholdingError::CountOutOfRange { n: 5, s: 0 }
        );
        assert_eq!(
            support_count(5, 5).unwrap_err(),
            ThresholdingError::CountOutOfRange { n: 5, s: 5 }
        );
        // C(67, 33) < 2^64 < C(68, 34).
        assert!(support_count(67, 33).is_ok());
        assert_eq!(
            support_count(68, 34).unwrap_err(),
            ThresholdingError::CountOverflow { n: 68, s: 34 }
        );
    }

    #[test]
    fn min_abs_nonzero_examples() {
        assert_eq!(min_abs_nonzero(&v(&[0.0, -0.2, 3.0])).unwrap(), 0.2);
        assert_eq!(min_abs_nonzero(&v(&[5.0])).unwrap(), 5.0);
        assert_eq!(min_abs_nonzero(&v(&[1e-9, 0.0, -1.0])).unwrap(), 1e-9);
        assert_eq!(
            min_abs_nonzero(&v(&[0.0, 0.0])).unwrap_err(),
            ThresholdingError::AllZero
        );
    }

    #[test]
    fn support_constructors_and_lookup() {
        let sup = Support::new(vec![1, 4, 9]).unwrap();
        assert_eq!(sup.len(), 3);
        assert!(sup.contains(4));
        assert!(!sup.contains(2));
        assert_eq!(
            Support::new(vec![3, 3]).unwrap_err(),
            ThresholdingError::UnsortedSupport
        );
        assert_eq!(
            Support::of_vector(&v(&[0.0, 1.0, 0.0, -2.0])).indices(),
            &[1, 3]
        );
        assert!(Support::empty().is_empty());
    }

    #[test]
    fn sparse_vector_validates_budget() {
        let err = SparseVector::from_dense(v(&[1.0, 2.0, 3.0]), 2).unwrap_err();
        assert_eq!(err, ThresholdingError::BudgetExceeded { nonzeros: 3, s: 2 });
        let ok = SparseVector::from_dense(v(&[1.0, 0.0, 3.0]), 2).unwrap();
        assert_eq!(ok.budget(), 2);
        assert_eq!(ok.support().indices(), &[0, 2]);
    }

    proptest! {
        #[test]
        fn budget_and_idempotence(
            data in proptest::collection::vec(-100.0f64..100.0, 1..10),
            s_raw in 0usize..10,
        ) {
            let x = Vector::new(data);
            let s = 1 + s_raw % x.dim();
            let once = hard_threshold(&x, s).unwrap();
            prop_assert!(once.support().len() <= s);
            let twice = hard_threshold(once.dense(), s).unwrap();
            prop_assert_eq!(twice.dense(), once.dense());
        }

        #[test]
        fn permutation_equivariance_for_distinct_magnitudes(
            seed in 0u64..1000,
            n in 2usize..8,
            s_raw in 0usize..8,
        ) {
            // Magnitudes 1, 2, ..., n with seeded signs and a seeded shuffle
            // guarantee all-distinct magnitudes.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base: Vec<f64> = (1..=n)
                .map(|k| if rng.random::<bool>() { k as f64 } else { -(k as f64) })
                .collect();
            let mut perm: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            let s = 1 + s_raw % n;

            let x = Vector::new(base.clone());
            let px = Vector::new(perm.iter().map(|&i| base[i]).collect());
            let hx = hard_threshold(&x, s).unwrap();
            let hpx = hard_threshold(&px, s).unwrap();
            let p_hx = Vector::new(perm.iter().map(|&i| hx.dense()[i]).collect());
            prop_assert_eq!(hpx.dense(), &p_hx);
        }
    }
}
