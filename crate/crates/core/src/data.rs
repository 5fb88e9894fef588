//! IRIS ingestion, seeded 120/30 splitting, and per-feature standardization.
//!
//! A canonical copy of the 150-row table is embedded in the binary; a CSV
//! path can override it. Standardization statistics come from the training
//! split only and are applied to both splits, so the test rows never leak
//! into the scaling.

use crate::linalg::Matrix;
use crate::objectives::Batch;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use thiserror::Error;

const EMBEDDED_IRIS: &str = include_str!("data/iris.csv");

/// Rows in the canonical table.
pub const IRIS_ROWS: usize = 150;
/// Feature columns (sepal length/width, petal length/width).
pub const IRIS_FEATURES: usize = 4;
/// Class count (setosa, versicolor, virginica).
pub const IRIS_CLASSES: usize = 3;
/// Training rows per split.
pub const TRAIN_ROWS: usize = 120;
/// Test rows per split.
pub const TEST_ROWS: usize = 30;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} comma-separated fields, got {got}")]
    FieldCount {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: could not parse feature value {value:?}")]
    BadFeature { line: usize, value: String },
    #[error("line {line}: unknown class label {label:?}")]
    BadLabel { line: usize, label: String },
    #[error("no data rows found")]
    Empty,
    #[error("expected {expected} rows, found {got}")]
    RowCount { expected: usize, got: usize },
    #[error("expected 50 rows per class, found counts {counts:?}")]
    ClassBalance { counts: [usize; IRIS_CLASSES] },
}

/// The raw (unstandardized) 150-row table.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_counts(&self) -> [usize; IRIS_CLASSES] {
        let mut counts = [0; IRIS_CLASSES];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}

/// Loads the table from `path`, or the embedded canonical copy when no path
/// is given. Validates the 150-row, 50-per-class shape.
pub fn load_iris(path: Option<&Path>) -> Result<Dataset, DataError> {
    let text: String = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| DataError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => EMBEDDED_IRIS.to_string(),
    };
    parse_iris(&text)
}

fn parse_label(raw: &str, line: usize) -> Result<usize, DataError> {
    let cleaned = raw.trim().trim_matches('"');
    // The classic distribution prefixes names with "Iris-".
    let name = cleaned
        .strip_prefix("Iris-")
        .or_else(|| cleaned.strip_prefix("iris-"))
        .unwrap_or(cleaned);
    match name.to_ascii_lowercase().as_str() {
        "setosa" | "0" => Ok(0),
        "versicolor" | "1" => Ok(1),
        "virginica" | "2" => Ok(2),
        _ => Err(DataError::BadLabel {
            line,
            label: raw.trim().to_string(),
        }),
    }
}

fn parse_iris(text: &str) -> Result<Dataset, DataError> {
    let mut rows: Vec<f64> = Vec::with_capacity(IRIS_ROWS * IRIS_FEATURES);
    let mut labels: Vec<usize> = Vec::with_capacity(IRIS_ROWS);
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != IRIS_FEATURES + 1 {
            return Err(DataError::FieldCount {
                line,
                expected: IRIS_FEATURES + 1,
                got: fields.len(),
            });
        }
        // A header line is recognized by a non-numeric first field.
        if idx == 0 && fields[0].trim().parse::<f64>().is_err() {
            continue;
        }
        for field in &fields[..IRIS_FEATURES] {
            let value = field.trim().parse::<f64>().map_err(|_| DataError::BadFeature {
                line,
                value: field.trim().to_string(),
            })?;
            rows.push(value);
        }
        labels.push(parse_label(fields[IRIS_FEATURES], line)?);
    }
    if labels.is_empty() {
        return Err(DataError::Empty);
    }
    if labels.len() != IRIS_ROWS {
        return Err(DataError::RowCount {
            expected: IRIS_ROWS,
            got: labels.len(),
        });
    }
    let features = Matrix::new(IRIS_ROWS, IRIS_FEATURES, rows).expect("counted rows");
    let dataset = Dataset { features, labels };
    let counts = dataset.class_counts();
    if counts != [50, 50, 50] {
        return Err(DataError::ClassBalance { counts });
    }
    Ok(dataset)
}

/// Which rows went to which side of a seeded split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    train: Vec<usize>,
    test: Vec<usize>,
    data_seed: u64,
}

impl Split {
    pub fn train_indices(&self) -> &[usize] {
        &self.train
    }

    pub fn test_indices(&self) -> &[usize] {
        &self.test
    }

    pub fn data_seed(&self) -> u64 {
        self.data_seed
    }
}

/// Standardized train/test batches plus the split and scaling that produced
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub train: Batch,
    pub test: Batch,
    pub split: Split,
    /// Per-column (mean, population std) measured on the training split.
    pub feature_stats: Vec<(f64, f64)>,
}

/// Shuffles the 150 rows with the seed, takes 120 for training and 30 for
/// testing, and standardizes every feature column with training statistics.
pub fn split_and_standardize(dataset: &Dataset, data_seed: u64) -> PreparedData {
    assert_eq!(dataset.len(), IRIS_ROWS, "loader enforces the row count");
    let mut order: Vec<usize> = (0..IRIS_ROWS).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(data_seed);
    order.shuffle(&mut rng);
    let mut train: Vec<usize> = order[..TRAIN_ROWS].to_vec();
    let mut test: Vec<usize> = order[TRAIN_ROWS..].to_vec();
    train.sort_unstable();
    test.sort_unstable();

    let feature_stats: Vec<(f64, f64)> = (0..IRIS_FEATURES)
        .map(|j| {
            let mean = train
                .iter()
                .map(|&r| dataset.features.get(r, j))
                .sum::<f64>()
                / TRAIN_ROWS as f64;
            let var = train
                .iter()
                .map(|&r| (dataset.features.get(r, j) - mean).powi(2))
                .sum::<f64>()
                / TRAIN_ROWS as f64;
            let std = var.sqrt();
            // A constant column carries no information; leave it centered.
            (mean, if std > 0.0 { std } else { 1.0 })
        })
        .collect();

    let build = |indices: &[usize]| -> Batch {
        let mut data = Vec::with_capacity(indices.len() * IRIS_FEATURES);
        let mut labels = Vec::with_capacity(indices.len());
        for &r in indices {
            for (j, &(mean, std)) in feature_stats.iter().enumerate() {
                data.push((dataset.features.get(r, j) - mean) / std);
            }
            labels.push(dataset.labels[r]);
        }
        let features = Matrix::new(indices.len(), IRIS_FEATURES, data).expect("counted rows");
        Batch::new(features, labels, IRIS_CLASSES).expect("nonempty, validated labels")
    };

    PreparedData {
        train: build(&train),
        test: build(&test),
        split: Split {
            train,
            test,
            data_seed,
        },
        feature_stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn column_mean_std(batch: &Batch, j: usize) -> (f64, f64) {
        let m = batch.len() as f64;
        let mean = (0..batch.len())
            .map(|r| batch.features().get(r, j))
            .sum::<f64>()
            / m;
        let var = (0..batch.len())
            .map(|r| (batch.features().get(r, j) - mean).powi(2))
            .sum::<f64>()
            / m;
        (mean, var.sqrt())
    }

    #[test]
    fn embedded_table_has_canonical_shape() {
        let d = load_iris(None).unwrap();
        assert_eq!(d.len(), 150);
        assert_eq!(d.class_counts(), [50, 50, 50]);
        assert_eq!(d.features().cols(), 4);
        assert!(d.features().is_finite());
    }

    #[test]
    fn rejects_empty_and_malformed_files() {
        assert!(matches!(parse_iris(""), Err(DataError::Empty)));
        assert!(matches!(
            parse_iris("a,b,c\n"),
            Err(DataError::FieldCount { line: 1, expected: 5, got: 3 })
        ));
        let bogus = "5.1,3.5,1.4,0.2,iris-bogus\n";
        match parse_iris(bogus) {
            Err(DataError::BadLabel { line, label }) => {
                assert_eq!(line, 1);
                assert_eq!(label, "iris-bogus");
            }
            other => panic!("expected a label error, got {other:?}"),
        }
        assert!(matches!(
            parse_iris("5.1,oops,1.4,0.2,setosa\n"),
            Err(DataError::BadFeature { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_wrong_row_count() {
        let two_rows = "5.1,3.5,1.4,0.2,setosa\n6.0,2.9,4.5,1.5,versicolor\n";
        assert!(matches!(
            parse_iris(two_rows),
            Err(DataError::RowCount { expected: 150, got: 2 })
        ));
    }

    #[test]
    fn accepts_numeric_labels_and_classic_prefixes() {
        assert_eq!(parse_label("Iris-virginica", 1).unwrap(), 2);
        assert_eq!(parse_label(" versicolor ", 1).unwrap(), 1);
        assert_eq!(parse_label("0", 1).unwrap(), 0);
    }

    #[test]
    fn splits_partition_the_rows() {
        let d = load_iris(None).unwrap();
        for seed in 0..20u64 {
            let prep = split_and_standardize(&d, seed);
            assert_eq!(prep.split.train_indices().len(), 120);
            assert_eq!(prep.split.test_indices().len(), 30);
            let all: HashSet<usize> = prep
                .split
                .train_indices()
                .iter()
                .chain(prep.split.test_indices())
                .copied()
                .collect();
            assert_eq!(all.len(), 150, "seed {seed}: overlap or gap");
        }
    }

    #[test]
    fn same_seed_reproduces_bit_for_bit() {
        let d = load_iris(None).unwrap();
        let a = split_and_standardize(&d, 42);
        let b = split_and_standardize(&d, 42);
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_give_different_splits() {
        let d = load_iris(None).unwrap();
        let a = split_and_standardize(&d, 0);
        let b = split_and_standardize(&d, 1);
        assert_ne!(a.split.train_indices(), b.split.train_indices());
    }

    #[test]
    fn training_columns_are_standardized() {
        let d = load_iris(None).unwrap();
        let prep = split_and_standardize(&d, 7);
        for j in 0..4 {
            let (mean, std) = column_mean_std(&prep.train, j);
            assert!(mean.abs() < 1e-9, "column {j} mean {mean:e}");
            assert!((std - 1.0).abs() < 1e-9, "column {j} std {std}");
        }
    }

    #[test]
    fn statistics_come_only_from_the_training_rows() {
        let d = load_iris(None).unwrap();
        let prep = split_and_standardize(&d, 3);
        for (j, &(mean, std)) in prep.feature_stats.iter().enumerate() {
            let m = prep.split.train_indices().len() as f64;
            let raw_mean = prep
                .split
                .train_indices()
                .iter()
                .map(|&r| d.features().get(r, j))
                .sum::<f64>()
                / m;
            let raw_var = prep
                .split
                .train_indices()
                .iter()
                .map(|&r| (d.features().get(r, j) - raw_mean).powi(2))
                .sum::<f64>()
                / m;
            assert!((mean - raw_mean).abs() < 1e-12);
            assert!((std - raw_var.sqrt()).abs() < 1e-12);
        }
        // Test rows were scaled with those same statistics.
        for (row, &r) in prep.split.test_indices().iter().enumerate() {
            for (j, &(mean, std)) in prep.feature_stats.iter().enumerate() {
                let expected = (d.features().get(r, j) - mean) / std;
                assert_eq!(prep.test.features().get(row, j), expected);
            }
        }
    }

    #[test]
    fn restandardizing_with_own_statistics_is_the_identity() {
        let d = load_iris(None).unwrap();
        let prep = split_and_standardize(&d, 11);
        for j in 0..4 {
            let (mean, std) = column_mean_std(&prep.train, j);
            for r in 0..prep.train.len() {
                let x = prep.train.features().get(r, j);
                let again = (x - mean) / std;
                assert!((again - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = load_iris(Some(Path::new("/nonexistent/iris.csv"))).unwrap_err();
        match err {
            DataError::Io { path, .. } => assert!(path.contains("nonexistent")),
            other => panic!("expected an io error, got {other:?}"),
        }
    }
}
