//! Differentiable training objectives and a finite-difference gradient check.
//!
//! Two concrete objectives are provided: a least-squares loss over a fixed
//! design matrix, and a one-layer softmax classifier whose weights and biases
//! are flattened into a single parameter vector so that sparsity constraints
//! apply to all of them uniformly.

use crate::linalg::{matvec, Matrix, Vector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ObjectiveError {
    #[error("parameter vector has dimension {got}, objective expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("design matrix has {rows} rows but there are {targets} targets")]
    TargetCount { rows: usize, targets: usize },
    #[error("batch is empty")]
    EmptyBatch,
    #[error("feature rows have {got} columns, classifier expects {expected}")]
    FeatureWidth { expected: usize, got: usize },
    #[error("label {label} at sample {sample} is outside 0..{classes}")]
    LabelOutOfRange {
        sample: usize,
        label: usize,
        classes: usize,
    },
    #[error("finite-difference step must be positive and finite, got {got}")]
    BadStep { got: f64 },
}

/// A differentiable function of a parameter vector, bounded below.
pub trait Objective {
    /// Total parameter count.
    fn dim(&self) -> usize;

    fn value(&self, theta: &Vector) -> Result<f64, ObjectiveError>;

    fn gradient(&self, theta: &Vector) -> Result<Vector, ObjectiveError>;

    fn value_grad(&self, theta: &Vector) -> Result<(f64, Vector), ObjectiveError> {
        Ok((self.value(theta)?, self.gradient(theta)?))
    }
}

fn check_dim(expected: usize, theta: &Vector) -> Result<(), ObjectiveError> {
    if theta.dim() != expected {
        return Err(ObjectiveError::DimensionMismatch {
            expected,
            got: theta.dim(),
        });
    }
    Ok(())
}

/// Least squares: `f(theta) = 1/2 ||X theta - y||^2`.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    x: Matrix,
    y: Vector,
}

impl QuadraticObjective {
    pub fn new(x: Matrix, y: Vector) -> Result<Self, ObjectiveError> {
        if x.rows() != y.dim() {
            return Err(ObjectiveError::TargetCount {
                rows: x.rows(),
                targets: y.dim(),
            });
        }
        Ok(QuadraticObjective { x, y })
    }

    pub fn design(&self) -> &Matrix {
        &self.x
    }

    fn residual(&self, theta: &Vector) -> Result<Vector, ObjectiveError> {
        check_dim(self.x.cols(), theta)?;
        Ok(matvec(&self.x, theta).expect("dimension checked").sub(&self.y))
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.x.cols()
    }

    fn value(&self, theta: &Vector) -> Result<f64, ObjectiveError> {
        Ok(0.5 * self.residual(theta)?.norm().powi(2))
    }

    fn gradient(&self, theta: &Vector) -> Result<Vector, ObjectiveError> {
        let r = self.residual(theta)?;
        // Gradient is X^T r.
        let mut g = Vector::zeros(self.x.cols());
        for i in 0..self.x.rows() {
            for j in 0..self.x.cols() {
                g[j] += self.x.get(i, j) * r[i];
            }
        }
        Ok(g)
    }

    fn value_grad(&self, theta: &Vector) -> Result<(f64, Vector), ObjectiveError> {
        let r = self.residual(theta)?;
        let mut g = Vector::zeros(self.x.cols());
        for i in 0..self.x.rows() {
            for j in 0..self.x.cols() {
                g[j] += self.x.get(i, j) * r[i];
            }
        }
        Ok((0.5 * r.norm().powi(2), g))
    }
}

/// A labelled batch: one feature row per sample, labels in `0..classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    features: Matrix,
    labels: Vec<usize>,
}

impl Batch {
    pub fn new(features: Matrix, labels: Vec<usize>, classes: usize) -> Result<Self, ObjectiveError> {
        if labels.is_empty() || features.rows() == 0 {
            return Err(ObjectiveError::EmptyBatch);
        }
        if features.rows() != labels.len() {
            return Err(ObjectiveError::TargetCount {
                rows: features.rows(),
                targets: labels.len(),
            });
        }
        for (sample, &label) in labels.iter().enumerate() {
            if label >= classes {
                return Err(ObjectiveError::LabelOutOfRange {
                    sample,
                    label,
                    classes,
                });
            }
        }
        Ok(Batch { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// A one-layer softmax classifier with `d` inputs and `c` classes.
///
/// The parameter vector flattens the weight matrix row-major first and the
/// biases last: coordinate `i*c + j` is the weight from input `i` to class
/// `j`, and coordinate `d*c + j` is the bias of class `j`. Biases are
/// ordinary coordinates, so a sparsity budget applies to them too.
#[derive(Debug, Clone, Copy)]
pub struct OneLayerClassifier {
    d: usize,
    c: usize,
}

impl OneLayerClassifier {
    pub fn new(d: usize, c: usize) -> Self {
        assert!(d >= 1 && c >= 2, "need at least one input and two classes");
        OneLayerClassifier { d, c }
    }

    /// The 4-feature, 3-class model used throughout the IRIS experiments
    /// (15 parameters).
    pub fn iris() -> Self {
        OneLayerClassifier::new(4, 3)
    }

    pub fn inputs(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> usize {
        self.c
    }

    pub fn param_count(&self) -> usize {
        self.d * self.c + self.c
    }

    /// Human-readable name per coordinate: `w11..w{d}{c}` then `b1..b{c}`,
    /// indices 1-based.
    pub fn param_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.param_count());
        for i in 1..=self.d {
            for j in 1..=self.c {
                names.push(format!("w{i}{j}"));
            }
        }
        for j in 1..=self.c {
            names.push(format!("b{j}"));
        }
        names
    }

    fn check_batch(&self, batch: &Batch) -> Result<(), ObjectiveError> {
        if batch.features.cols() != self.d {
            return Err(ObjectiveError::FeatureWidth {
                expected: self.d,
                got: batch.features.cols(),
            });
        }
        if let Some((sample, &label)) = batch
            .labels
            .iter()
            .enumerate()
            .find(|(_, &l)| l >= self.c)
        {
            return Err(ObjectiveError::LabelOutOfRange {
                sample,
                label,
                classes: self.c,
            });
        }
        Ok(())
    }

    fn logits(&self, theta: &Vector, x: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.c];
        for (j, zj) in z.iter_mut().enumerate() {
            *zj = theta[self.d * self.c + j];
            for (i, &xi) in x.iter().enumerate() {
                *zj += theta[i * self.c + j] * xi;
            }
        }
        z
    }

    /// Softmax probabilities with max-subtraction for overflow safety.
    fn softmax(z: &[f64]) -> Vec<f64> {
        let zmax = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let exps: Vec<f64> = z.iter().map(|&zj| (zj - zmax).exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.into_iter().map(|e| e / total).collect()
    }

    /// Mean cross-entropy over the batch and its analytic gradient.
    pub fn value_grad(&self, theta: &Vector, batch: &Batch) -> Result<(f64, Vector), ObjectiveError> {
        check_dim(self.param_count(), theta)?;
        self.check_batch(batch)?;
        let m = batch.len() as f64;
        let mut loss = 0.0;
        let mut grad = Vector::zeros(self.param_count());
        for (row, &label) in batch.labels.iter().enumerate() {
            let x = batch.features.row(row);
            let z = self.logits(theta, x);
            let zmax = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            let log_sum: f64 = z.iter().map(|&zj| (zj - zmax).exp()).sum::<f64>().ln() + zmax;
            loss += log_sum - z[label];
            let p = Self::softmax(&z);
            for j in 0..self.c {
                // d loss / d z_j = p_j - [j == label], averaged over the batch.
                let e = (p[j] - if j == label { 1.0 } else { 0.0 }) / m;
                for (i, &xi) in x.iter().enumerate() {
                    grad[i * self.c + j] += e * xi;
                }
                grad[self.d * self.c + j] += e;
            }
        }
        Ok((loss / m, grad))
    }

    pub fn value(&self, theta: &Vector, batch: &Batch) -> Result<f64, ObjectiveError> {
        Ok(self.value_grad(theta, batch)?.0)
    }

    /// Fraction of samples whose argmax logit matches the label; on tied
    /// logits the smallest class index is predicted.
    pub fn accuracy(&self, theta: &Vector, batch: &Batch) -> Result<f64, ObjectiveError> {
        check_dim(self.param_count(), theta)?;
        self.check_batch(batch)?;
        let mut correct = 0usize;
        for (row, &label) in batch.labels.iter().enumerate() {
            let z = self.logits(theta, batch.features.row(row));
            let mut pred = 0usize;
            for (j, &zj) in z.iter().enumerate() {
                if zj > z[pred] {
                    pred = j;
                }
            }
            if pred == label {
                correct += 1;
            }
        }
        Ok(correct as f64 / batch.len() as f64)
    }
}

/// A classifier bound to a fixed batch, as a self-contained [`Objective`].
#[derive(Debug, Clone)]
pub struct ClassifierObjective {
    model: OneLayerClassifier,
    batch: Batch,
}

impl ClassifierObjective {
    pub fn new(model: OneLayerClassifier, batch: Batch) -> Result<Self, ObjectiveError> {
        model.check_batch(&batch)?;
        Ok(ClassifierObjective { model, batch })
    }

    pub fn model(&self) -> &OneLayerClassifier {
        &self.model
    }

    pub fn batch(&self) -> &Batch {
        &self.batch
    }
}

impl Objective for ClassifierObjective {
    fn dim(&self) -> usize {
        self.model.param_count()
    }

    fn value(&self, theta: &Vector) -> Result<f64, ObjectiveError> {
        self.model.value(theta, &self.batch)
    }

    fn gradient(&self, theta: &Vector) -> Result<Vector, ObjectiveError> {
        Ok(self.model.value_grad(theta, &self.batch)?.1)
    }

    fn value_grad(&self, theta: &Vector) -> Result<(f64, Vector), ObjectiveError> {
        self.model.value_grad(theta, &self.batch)
    }
}

/// Central-difference gradient `(f(theta + h e_i) - f(theta - h e_i)) / 2h`.
pub fn finite_diff_gradient<O: Objective + ?Sized>(
    obj: &O,
    theta: &Vector,
    h: f64,
) -> Result<Vector, ObjectiveError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ObjectiveError::BadStep { got: h });
    }
    check_dim(obj.dim(), theta)?;
    let mut g = Vector::zeros(theta.dim());
    let mut probe = theta.clone();
    for i in 0..theta.dim() {
        let base = theta[i];
        probe[i] = base + h;
        let plus = obj.value(&probe)?;
        probe[i] = base - h;
        let minus = obj.value(&probe)?;
        probe[i] = base;
        g[i] = (plus - minus) / (2.0 * h);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gram, max_eigenvalue};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const LN_3: f64 = 1.0986122886681098;

    fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
        Vector::new((0..n).map(|_| rng.sample(rand_distr::StandardNormal)).collect())
    }

    fn random_batch(rng: &mut ChaCha8Rng, m: usize) -> Batch {
        let features = Matrix::new(
            m,
            4,
            (0..m * 4)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect(),
        )
        .unwrap();
        let labels = (0..m).map(|_| rng.random_range(0..3)).collect();
        Batch::new(features, labels, 3).unwrap()
    }

    fn relative_error(got: &Vector, want: &Vector) -> f64 {
        got.sub(want).norm() / want.norm().max(1e-12)
    }

    #[test]
    fn quadratic_at_global_minimum() {
        let q = QuadraticObjective::new(Matrix::identity(2), Vector::new(vec![1.0, 0.0])).unwrap();
        let (value, grad) = q.value_grad(&Vector::new(vec![1.0, 0.0])).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(grad.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn quadratic_at_origin() {
        let q = QuadraticObjective::new(Matrix::identity(2), Vector::new(vec![1.0, 0.0])).unwrap();
        let (value, grad) = q.value_grad(&Vector::new(vec![0.0, 0.0])).unwrap();
        assert_eq!(value, 0.5);
        assert_eq!(grad.as_slice(), &[-1.0, 0.0]);
    }

    #[test]
    fn quadratic_rejects_wrong_dimension() {
        let q = QuadraticObjective::new(Matrix::identity(2), Vector::new(vec![1.0, 0.0])).unwrap();
        assert!(matches!(
            q.value(&Vector::new(vec![1.0])),
            Err(ObjectiveError::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(
            QuadraticObjective::new(Matrix::zeros(3, 2), Vector::new(vec![0.0])),
            Err(ObjectiveError::TargetCount { rows: 3, targets: 1 })
        ));
    }

    #[test]
    fn quadratic_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = Matrix::new(
            4,
            3,
            (0..12)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect(),
        )
        .unwrap();
        let q = QuadraticObjective::new(x, random_vector(&mut rng, 4)).unwrap();
        for _ in 0..20 {
            let theta = random_vector(&mut rng, 3);
            let analytic = q.gradient(&theta).unwrap();
            let numeric = finite_diff_gradient(&q, &theta, 1e-5).unwrap();
            let rel = relative_error(&analytic, &numeric);
            assert!(rel < 1e-8, "relative error {rel:e}");
        }
    }

    #[test]
    fn quadratic_gradient_is_lipschitz_with_gram_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = Matrix::new(
            5,
            4,
            (0..20)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect(),
        )
        .unwrap();
        let lipschitz = max_eigenvalue(&gram(&x).unwrap(), 1e-12).unwrap();
        let q = QuadraticObjective::new(x, random_vector(&mut rng, 5)).unwrap();
        for _ in 0..50 {
            let a = random_vector(&mut rng, 4);
            let b = random_vector(&mut rng, 4);
            let lhs = q.gradient(&a).unwrap().sub(&q.gradient(&b).unwrap()).norm();
            let rhs = lipschitz * a.sub(&b).norm();
            assert!(lhs <= rhs * (1.0 + 1e-10), "{lhs} > {rhs}");
        }
    }

    #[test]
    fn zero_parameters_give_uniform_softmax_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model = OneLayerClassifier::iris();
        for m in [1, 5, 12] {
            let batch = random_batch(&mut rng, m);
            let value = model.value(&Vector::zeros(15), &batch).unwrap();
            assert!((value - LN_3).abs() < 1e-12, "got {value}");
        }
    }

    #[test]
    fn saturated_correct_prediction_has_negligible_loss_and_gradient() {
        let model = OneLayerClassifier::iris();
        let batch = Batch::new(
            Matrix::new(1, 4, vec![1.0, 0.0, 0.0, 0.0]).unwrap(),
            vec![0],
            3,
        )
        .unwrap();
        // Only the biases are set: logits are [50, 0, 0] and class 0 is true.
        let mut theta = Vector::zeros(15);
        theta[12] = 50.0;
        let (value, grad) = model.value_grad(&theta, &batch).unwrap();
        assert!(value < 1e-20, "loss {value:e}");
        assert!(grad.norm() < 1e-20, "gradient norm {:e}", grad.norm());
    }

    #[test]
    fn classifier_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let model = OneLayerClassifier::iris();
        for _ in 0..20 {
            let batch = random_batch(&mut rng, 8);
            let obj = ClassifierObjective::new(model, batch).unwrap();
            let theta = random_vector(&mut rng, 15);
            let analytic = obj.gradient(&theta).unwrap();
            let numeric = finite_diff_gradient(&obj, &theta, 1e-5).unwrap();
            let rel = relative_error(&analytic, &numeric);
            assert!(rel < 1e-6, "relative error {rel:e}");
        }
    }

    #[test]
    fn cross_entropy_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let model = OneLayerClassifier::iris();
        for _ in 0..50 {
            let batch = random_batch(&mut rng, 6);
            let theta = random_vector(&mut rng, 15).scale(rng.random_range(0.0..10.0));
            let value = model.value(&theta, &batch).unwrap();
            assert!(value >= 0.0, "negative cross-entropy {value}");
        }
    }

    #[test]
    fn accuracy_with_zero_parameters_predicts_class_zero() {
        let model = OneLayerClassifier::iris();
        let batch = Batch::new(
            Matrix::new(4, 4, vec![0.5; 16]).unwrap(),
            vec![0, 1, 0, 2],
            3,
        )
        .unwrap();
        let acc = model.accuracy(&Vector::zeros(15), &batch).unwrap();
        assert_eq!(acc, 0.5);
    }

    #[test]
    fn accuracy_of_perfect_separator() {
        let model = OneLayerClassifier::iris();
        let features = Matrix::new(
            3,
            4,
            vec![
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        let batch = Batch::new(features, vec![0, 1, 2], 3).unwrap();
        // One-hot features on the first three inputs; weight w_ii = 1 routes
        // each sample to its own class.
        let mut theta = Vector::zeros(15);
        theta[0] = 1.0; // w11
        theta[4] = 1.0; // w22
        theta[8] = 1.0; // w33
        assert_eq!(model.accuracy(&theta, &batch).unwrap(), 1.0);
    }

    #[test]
    fn accuracy_matches_per_sample_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let model = OneLayerClassifier::iris();
        for _ in 0..20 {
            let batch = random_batch(&mut rng, 10);
            let theta = random_vector(&mut rng, 15);
            let got = model.accuracy(&theta, &batch).unwrap();
            let mut correct = 0;
            for (row, &label) in batch.labels().iter().enumerate() {
                let x = batch.features().row(row);
                let mut z = vec![0.0; 3];
                for j in 0..3 {
                    z[j] = theta[12 + j];
                    for i in 0..4 {
                        z[j] += theta[i * 3 + j] * x[i];
                    }
                }
                let mut best = 0;
                for j in 1..3 {
                    if z[j] > z[best] {
                        best = j;
                    }
                }
                if best == label {
                    correct += 1;
                }
            }
            assert_eq!(got, correct as f64 / 10.0);
        }
    }

    #[test]
    fn batch_validation() {
        assert!(matches!(
            Batch::new(Matrix::zeros(0, 4), vec![], 3),
            Err(ObjectiveError::EmptyBatch)
        ));
        assert!(matches!(
            Batch::new(Matrix::zeros(1, 4), vec![3], 3),
            Err(ObjectiveError::LabelOutOfRange { label: 3, .. })
        ));
        let wide = Batch::new(Matrix::zeros(1, 5), vec![0], 3).unwrap();
        let model = OneLayerClassifier::iris();
        assert!(matches!(
            model.value(&Vector::zeros(15), &wide),
            Err(ObjectiveError::FeatureWidth { expected: 4, got: 5 })
        ));
    }

    #[test]
    fn finite_diff_of_constant_objective_is_zero() {
        struct Constant;
        impl Objective for Constant {
            fn dim(&self) -> usize {
                3
            }
            fn value(&self, _theta: &Vector) -> Result<f64, ObjectiveError> {
                Ok(7.5)
            }
            fn gradient(&self, _theta: &Vector) -> Result<Vector, ObjectiveError> {
                Ok(Vector::zeros(3))
            }
        }
        let g = finite_diff_gradient(&Constant, &Vector::new(vec![1.0, -2.0, 0.5]), 1e-5).unwrap();
        assert_eq!(g.as_slice(), &[0.0, 0.0, 0.0]);
        assert!(matches!(
            finite_diff_gradient(&Constant, &Vector::zeros(3), 0.0),
            Err(ObjectiveError::BadStep { .. })
        ));
    }

    #[test]
    fn parameter_names_follow_layout() {
        let names = OneLayerClassifier::iris().param_names();
        assert_eq!(names.len(), 15);
        assert_eq!(names[0], "w11");
        assert_eq!(names[2], "w13");
        assert_eq!(names[3], "w21");
        assert_eq!(names[11], "w43");
        assert_eq!(names[12], "b1");
        assert_eq!(names[14], "b3");
    }
}
