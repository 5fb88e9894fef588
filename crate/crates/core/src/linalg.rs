//! Minimal dense vector/matrix arithmetic and a dominant-eigenvalue routine.
//!
//! Everything here operates on `f64` and is sized for the small problems the
//! rest of the crate deals in (matrices of at most a few hundred entries).
//! There is deliberately no BLAS, no sparse storage, and no complex
//! arithmetic.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Iteration cap for [`max_eigenvalue`].
const MAX_EIG_ITERS: usize = 10_000;

/// Fixed seed for the power-iteration start vector, so repeated calls on the
/// same matrix return bit-identical results.
const POWER_ITERATION_SEED: u64 = 0x1e16_5eed;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("{context}: dimension mismatch (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix data length {got} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("non-finite entry in {context}")]
    NonFinite { context: &'static str },
    #[error("tolerance must be a positive finite number, got {got}")]
    BadTolerance { got: f64 },
    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// A dense real vector with a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Self {
        Vector { data }
    }

    pub fn zeros(n: usize) -> Self {
        Vector { data: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "add_scaled: dimension mismatch");
        Vector::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        Vector::new(self.data.iter().map(|a| a * alpha).collect())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(data: Vec<f64>) -> Self {
        Vector::new(data)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// A dense real matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadShape {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::BadShape {
                    rows: m,
                    cols: n,
                    got: r.len(),
                });
            }
        }
        Ok(Matrix {
            rows: m,
            cols: n,
            data: rows.concat(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// A new matrix keeping only the listed columns, in the listed order.
    pub fn select_columns(&self, indices: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (k, &j) in indices.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }
}

/// Standard matrix-vector product `A v`.
pub fn matvec(a: &Matrix, v: &Vector) -> Result<Vector, LinalgError> {
    if a.cols() != v.dim() {
        return Err(LinalgError::DimensionMismatch {
            context: "matvec",
            expected: a.cols(),
            got: v.dim(),
        });
    }
    let mut out = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        out.push(
            a.row(i)
                .iter()
                .zip(v.as_slice())
                .map(|(x, y)| x * y)
                .sum(),
        );
    }
    Ok(Vector::new(out))
}

/// The Gram matrix `AᵀA`, symmetrized so that `g[i][j] == g[j][i]` exactly.
pub fn gram(a: &Matrix) -> Result<Matrix, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite { context: "gram" });
    }
    let n = a.cols();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for r in 0..a.rows() {
                s += a.get(r, i) * a.get(r, j);
            }
            g.set(i, j, s);
            g.set(j, i, s);
        }
    }
    Ok(g)
}

fn check_symmetric(s: &Matrix) -> Result<(), LinalgError> {
    let scale = s
        .data
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()))
        .max(1.0);
    for i in 0..s.rows() {
        for j in (i + 1)..s.cols() {
            let delta = (s.get(i, j) - s.get(j, i)).abs();
            if delta > 1e-12 * scale {
                return Err(LinalgError::NotSymmetric { i, j, delta });
            }
        }
    }
    Ok(())
}

/// Largest eigenvalue of a symmetric positive-semidefinite matrix, by power
/// iteration with a seeded start vector.
///
/// Converges when the Rayleigh-quotient estimate changes by less than `tol`
/// in relative terms. Deterministic for fixed inputs.
pub fn max_eigenvalue(s: &Matrix, tol: f64) -> Result<f64, LinalgError> {
    if s.rows() != s.cols() || s.rows() == 0 {
        return Err(LinalgError::BadShape {
            rows: s.rows(),
            cols: s.cols(),
            got: s.data.len(),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LinalgError::BadTolerance { got: tol });
    }
    if !s.is_finite() {
        return Err(LinalgError::NonFinite {
            context: "max_eigenvalue",
        });
    }
    check_symmetric(s)?;

    let n = s.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_ITERATION_SEED);
    let mut v = Vector::new((0..n).map(|_| rng.sample(rand_distr::StandardNormal)).collect());
    let norm = v.norm();
    v = v.scale(1.0 / norm);

    let mut lambda = 0.0_f64;
    for _ in 0..MAX_EIG_ITERS {
        let w = matvec(s, &v).expect("square matrix");
        let next = v.dot(&w);
        let wnorm = w.norm();
        if wnorm == 0.0 {
            // The start vector lies in the kernel; for a PSD matrix this
            // only happens when the matrix is zero on the sampled subspace.
            return Ok(0.0);
        }
        let converged = (next - lambda).abs() <= tol * next.abs().max(f64::MIN_POSITIVE);
        lambda = next;
        v = w.scale(1.0 / wnorm);
        if converged {
            return Ok(lambda);
        }
    }
    Err(LinalgError::NoConvergence(MAX_EIG_ITERS))
}
