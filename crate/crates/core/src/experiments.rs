//! The seeded experiment harness: one sparse training run end to end, the
//! dense baseline, sweeps over sparsity levels, and per-level aggregation.
//!
//! Every run is a pure function of three seeds (data, initialization,
//! support) plus the protocol settings. Each internal consumer draws from
//! its own derived stream, so runs reproduce bit for bit and extending a
//! sweep never perturbs existing rows.

use crate::data::{split_and_standardize, Dataset, IRIS_CLASSES, IRIS_FEATURES};
use crate::linalg::Vector;
use crate::objectives::{ClassifierObjective, OneLayerClassifier};
use crate::optim::{gd_run, iht_run, GdConfig, IhtConfig, StopReason, Trace};
use crate::rss::{derive_learning_rate, estimate_l2s, RssError, RssEstimate};
use crate::seeds;
use crate::stability::{check_ht_stable, StabilityReport};
use crate::thresholding::{SparseVector, Support};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("sparsity level must be within 1..={max}, got {s}")]
    BadLevel { s: usize, max: usize },
    #[error("no sparsity levels given")]
    NoLevels,
    #[error("no records to aggregate")]
    NoRecords,
}

/// The three user-facing seeds of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTriple {
    pub data: u64,
    pub init: u64,
    pub support: u64,
}

/// Shared run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    /// Monte Carlo trials for the smoothness estimate.
    pub n_monte: usize,
    pub max_steps: usize,
    pub loss_stop: f64,
    /// Trace density passed through to the optimizer; 0 keeps only the
    /// terminal row, which is what sweeps want.
    pub trace_every: usize,
}

impl Protocol {
    /// The patient protocol: 10,000 steps.
    pub fn extended() -> Self {
        Protocol {
            n_monte: 100,
            max_steps: 10_000,
            loss_stop: 0.05,
            trace_every: 0,
        }
    }

    /// Desk-scale protocol for quick sweeps: 2,000 steps.
    pub fn desk() -> Self {
        Protocol {
            max_steps: 2_000,
            ..Protocol::extended()
        }
    }
}

/// Whether a record came from a sparse IHT run or the dense baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Sparse,
    Dense,
}

impl std::fmt::Display for RunKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RunKind::Sparse => "sparse",
            RunKind::Dense => "dense",
        })
    }
}

/// Metrics of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub gamma: f64,
    pub stop_reason: StopReason,
    pub steps: usize,
    pub train_loss: f64,
    pub test_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
    /// Absent for the dense baseline.
    pub stability: Option<StabilityReport>,
    pub final_support: Support,
    pub final_theta: Vector,
}

/// A run either completes with metrics or is retained as a failure row, so
/// rates keep an honest denominator.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok(RunOutcome),
    Failed { reason: String },
}

impl RunStatus {
    pub fn outcome(&self) -> Option<&RunOutcome> {
        match self {
            RunStatus::Ok(o) => Some(o),
            RunStatus::Failed { .. } => None,
        }
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub kind: RunKind,
    /// Sparsity level; the dense baseline reports the full parameter count.
    pub s: usize,
    pub seeds: SeedTriple,
    pub status: RunStatus,
}

/// Error text condensed into a single CSV-safe token.
fn failure_reason(err: &dyn std::fmt::Display) -> String {
    let text = err.to_string().to_ascii_lowercase();
    let mut out = String::with_capacity(text.len());
    let mut last_was_sep = false;
    for ch in text.chars() {
        if ch.is_ascii_alphanumeric() || ch == '.' || ch == '-' {
            out.push(ch);
            last_was_sep = false;
        } else if !last_was_sep && !out.is_empty() {
            out.push('_');
            last_was_sep = true;
        }
    }
    out.trim_end_matches('_').to_string()
}

/// Draws an initial point with `s` nonzeros: the support comes uniformly
/// without replacement from the support seed's stream, the values are
/// standard normal from the initialization seed's stream.
pub fn sparse_init(n: usize, s: usize, init_seed: u64, support_seed: u64) -> SparseVector {
    assert!(s >= 1 && s < n, "sparse_init needs 1 <= s < n");
    let mut support_rng =
        ChaCha8Rng::seed_from_u64(seeds::substream(support_seed, seeds::TAG_SUPPORT));
    let mut indices = rand::seq::index::sample(&mut support_rng, n, s).into_vec();
    indices.sort_unstable();

    let mut init_rng = ChaCha8Rng::seed_from_u64(seeds::substream(init_seed, seeds::TAG_INIT));
    let mut dense = Vector::zeros(n);
    for &i in &indices {
        dense[i] = init_rng.sample(rand_distr::StandardNormal);
    }
    SparseVector::from_dense(dense, s).expect("at most s nonzeros by construction")
}

/// Draws a fully dense initial point from the initialization seed's stream.
pub fn dense_init(n: usize, init_seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::substream(init_seed, seeds::TAG_INIT));
    Vector::new((0..n).map(|_| rng.sample(rand_distr::StandardNormal)).collect())
}

/// Everything a single-run command wants to show: the record plus, when the
/// run completed, its optimizer trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub record: ExperimentRecord,
    pub trace: Option<Trace>,
}

/// The smoothness estimate and learning rate exactly as a level-`s` run
/// derives them: the training objective comes from the data seed's split and
/// the trial stream from the initialization seed. `s` equal to the full
/// parameter count gives the dense baseline's unrestricted estimate.
pub fn estimate_for_level(
    dataset: &Dataset,
    data_seed: u64,
    init_seed: u64,
    s: usize,
    n_monte: usize,
) -> Result<(RssEstimate, f64), RssError> {
    let prep = split_and_standardize(dataset, data_seed);
    let obj = ClassifierObjective::new(OneLayerClassifier::iris(), prep.train.clone())?;
    let est = estimate_l2s(
        &obj,
        s,
        n_monte,
        seeds::substream(init_seed, seeds::TAG_MONTE),
    )?;
    let gamma = derive_learning_rate(&est)?;
    Ok((est, gamma))
}

/// One sparse experiment: split the data, draw the start, estimate the
/// smoothness to set the learning rate, run IHT, and certify the end point.
pub fn run_sparse_experiment(
    dataset: &Dataset,
    seeds_in: SeedTriple,
    s: usize,
    protocol: &Protocol,
) -> RunArtifacts {
    let model = OneLayerClassifier::iris();
    let n = model.param_count();
    debug_assert_eq!(n, IRIS_FEATURES * IRIS_CLASSES + IRIS_CLASSES);

    let fail = |reason: String| RunArtifacts {
        record: ExperimentRecord {
            kind: RunKind::Sparse,
            s,
            seeds: seeds_in,
            status: RunStatus::Failed { reason },
        },
        trace: None,
    };

    if s < 1 || s >= n {
        return fail(format!("sparsity_out_of_range_{s}"));
    }

    let prep = split_and_standardize(dataset, seeds_in.data);
    let theta0 = sparse_init(n, s, seeds_in.init, seeds_in.support);
    let train_obj = ClassifierObjective::new(model, prep.train.clone())
        .expect("batch shape fixed by the loader");

    let est = match estimate_l2s(
        &train_obj,
        s,
        protocol.n_monte,
        seeds::substream(seeds_in.init, seeds::TAG_MONTE),
    ) {
        Ok(est) => est,
        Err(e) => return fail(failure_reason(&e)),
    };
    let gamma = match derive_learning_rate(&est) {
        Ok(g) => g,
        Err(e) => return fail(failure_reason(&e)),
    };

    let cfg = IhtConfig::new(s, gamma)
        .with_max_steps(protocol.max_steps)
        .with_loss_stop(protocol.loss_stop)
        .with_trace_every(protocol.trace_every);
    let (theta, trace) = match iht_run(&train_obj, &theta0, &cfg) {
        Ok(done) => done,
        Err(e) => return fail(failure_reason(&e)),
    };

    let stability = match check_ht_stable(&theta, trace.final_gradient(), gamma) {
        Ok(report) => report,
        Err(e) => return fail(failure_reason(&e)),
    };
    let outcome = RunOutcome {
        gamma,
        stop_reason: trace.stop_reason(),
        steps: trace.steps_taken(),
        train_loss: trace.final_loss(),
        test_loss: model
            .value(theta.dense(), &prep.test)
            .expect("dimensions fixed"),
        train_acc: model
            .accuracy(theta.dense(), &prep.train)
            .expect("dimensions fixed"),
        test_acc: model
            .accuracy(theta.dense(), &prep.test)
            .expect("dimensions fixed"),
        stability: Some(stability),
        final_support: theta.support().clone(),
        final_theta: theta.dense().clone(),
    };
    RunArtifacts {
        record: ExperimentRecord {
            kind: RunKind::Sparse,
            s,
            seeds: seeds_in,
            status: RunStatus::Ok(outcome),
        },
        trace: Some(trace),
    }
}

/// One dense baseline run: same pipeline with a full-dimensional start, the
/// unrestricted smoothness estimate, and plain gradient descent.
pub fn run_dense_baseline(
    dataset: &Dataset,
    data_seed: u64,
    init_seed: u64,
    protocol: &Protocol,
) -> RunArtifacts {
    let model = OneLayerClassifier::iris();
    let n = model.param_count();
    let seeds_in = SeedTriple {
        data: data_seed,
        init: init_seed,
        support: 0,
    };

    let fail = |reason: String| RunArtifacts {
        record: ExperimentRecord {
            kind: RunKind::Dense,
            s: n,
            seeds: seeds_in,
            status: RunStatus::Failed { reason },
        },
        trace: None,
    };

    let prep = split_and_standardize(dataset, data_seed);
    let theta0 = dense_init(n, init_seed);
    let train_obj = ClassifierObjective::new(model, prep.train.clone())
        .expect("batch shape fixed by the loader");

    let est = match estimate_l2s(
        &train_obj,
        n,
        protocol.n_monte,
        seeds::substream(init_seed, seeds::TAG_MONTE),
    ) {
        Ok(est) => est,
        Err(e) => return fail(failure_reason(&e)),
    };
    let gamma = match derive_learning_rate(&est) {
        Ok(g) => g,
        Err(e) => return fail(failure_reason(&e)),
    };

    let cfg = GdConfig::new(gamma)
        .with_max_steps(protocol.max_steps)
        .with_loss_stop(protocol.loss_stop)
        .with_trace_every(protocol.trace_every);
    let (theta, trace) = match gd_run(&train_obj, &theta0, &cfg) {
        Ok(done) => done,
        Err(e) => return fail(failure_reason(&e)),
    };

    let outcome = RunOutcome {
        gamma,
        stop_reason: trace.stop_reason(),
        steps: trace.steps_taken(),
        train_loss: trace.final_loss(),
        test_loss: model.value(&theta, &prep.test).expect("dimensions fixed"),
        train_acc: model
            .accuracy(&theta, &prep.train)
            .expect("dimensions fixed"),
        test_acc: model.accuracy(&theta, &prep.test).expect("dimensions fixed"),
        stability: None,
        final_support: Support::of_vector(&theta),
        final_theta: theta,
    };
    RunArtifacts {
        record: ExperimentRecord {
            kind: RunKind::Dense,
            s: n,
            seeds: seeds_in,
            status: RunStatus::Ok(outcome),
        },
        trace: Some(trace),
    }
}

/// Sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub runs_per_level: usize,
    pub levels: Vec<usize>,
    pub protocol: Protocol,
    /// Root seed from which every run's seed triple is derived.
    pub seed_master: u64,
    /// Reuse one data seed sequence across all levels and the dense
    /// baseline, pairing run `r` everywhere; unpaired draws are the default.
    pub pair_data_seeds: bool,
}

impl SweepConfig {
    /// Desk defaults: 50 runs per level, all levels 1..=14, 2,000 steps.
    pub fn desk() -> Self {
        SweepConfig {
            runs_per_level: 50,
            levels: (1..=14).collect(),
            protocol: Protocol::desk(),
            seed_master: 0,
            pair_data_seeds: false,
        }
    }
}

fn sweep_seed(master: u64, role_tag: u64, level: usize, run: usize, paired: bool) -> u64 {
    // Paired mode collapses the level axis so run r sees the same value at
    // every level (and in the dense baseline).
    let index = if paired {
        run as u64
    } else {
        ((level as u64) << 32) | run as u64
    };
    seeds::indexed(seeds::substream(master, role_tag), index)
}

/// Seed triple of sparse run `run` at `level` under `cfg`.
pub fn sweep_seeds(cfg: &SweepConfig, level: usize, run: usize) -> SeedTriple {
    SeedTriple {
        data: sweep_seed(
            cfg.seed_master,
            seeds::TAG_SWEEP_DATA,
            level,
            run,
            cfg.pair_data_seeds,
        ),
        init: sweep_seed(cfg.seed_master, seeds::TAG_SWEEP_INIT, level, run, false),
        support: sweep_seed(cfg.seed_master, seeds::TAG_SWEEP_SUPPORT, level, run, false),
    }
}

/// Seed pair of dense baseline run `run` under `cfg`; the data stream is the
/// paired one when pairing is on, the dense-only slot otherwise.
pub fn dense_sweep_seeds(cfg: &SweepConfig, run: usize) -> (u64, u64) {
    let dense_level = OneLayerClassifier::iris().param_count();
    let data = sweep_seed(
        cfg.seed_master,
        seeds::TAG_SWEEP_DATA,
        dense_level,
        run,
        cfg.pair_data_seeds,
    );
    let init = sweep_seed(cfg.seed_master, seeds::TAG_SWEEP_INIT, dense_level, run, false);
    (data, init)
}

/// Runs the full sweep: `runs_per_level` sparse runs at every level, then
/// the same number of dense baseline runs. Rows arrive sorted by
/// (level, run), dense last. `on_progress` is called after every run with
/// (done, total).
pub fn run_sweep(
    dataset: &Dataset,
    cfg: &SweepConfig,
    mut on_progress: impl FnMut(usize, usize),
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    if cfg.runs_per_level < 1 {
        return Err(ExperimentError::NoRuns);
    }
    if cfg.levels.is_empty() {
        return Err(ExperimentError::NoLevels);
    }
    let max_level = OneLayerClassifier::iris().param_count() - 1;
    for &s in &cfg.levels {
        if s < 1 || s > max_level {
            return Err(ExperimentError::BadLevel { s, max: max_level });
        }
    }
    let mut levels = cfg.levels.clone();
    levels.sort_unstable();
    levels.dedup();

    let total = (levels.len() + 1) * cfg.runs_per_level;
    let mut done = 0usize;
    let mut records = Vec::with_capacity(total);
    for &s in &levels {
        for run in 0..cfg.runs_per_level {
            let triple = sweep_seeds(cfg, s, run);
            records.push(run_sparse_experiment(dataset, triple, s, &cfg.protocol).record);
            done += 1;
            on_progress(done, total);
        }
    }
    for run in 0..cfg.runs_per_level {
        let (data_seed, init_seed) = dense_sweep_seeds(cfg, run);
        records.push(run_dense_baseline(dataset, data_seed, init_seed, &cfg.protocol).record);
        done += 1;
        on_progress(done, total);
    }
    Ok(records)
}

/// min/quartiles/max/mean of one metric across a group of runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

impl MetricSummary {
    /// NaN-filled summary for an empty group.
    fn empty() -> Self {
        MetricSummary {
            min: f64::NAN,
            q1: f64::NAN,
            median: f64::NAN,
            q3: f64::NAN,
            max: f64::NAN,
            mean: f64::NAN,
        }
    }

    pub fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::empty();
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite metrics"));
        MetricSummary {
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        }
    }
}

/// Linear-interpolation quantile of an ascending slice (the convention most
/// statistics packages default to).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty() && (0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 == sorted.len() {
        return sorted[lo];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// Per-(kind, level) aggregates over a sweep's records.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub kind: RunKind,
    pub s: usize,
    pub runs: usize,
    pub ok: usize,
    pub stopped_by_loss: usize,
    pub stopped_by_cap: usize,
    /// Stable completions / completions; `None` when nothing completed or
    /// the group is the dense baseline, which carries no stability check.
    pub stable_rate: Option<f64>,
    pub gamma: MetricSummary,
    pub train_loss: MetricSummary,
    pub test_loss: MetricSummary,
    pub train_acc: MetricSummary,
    pub test_acc: MetricSummary,
}

/// Groups records by (kind, level) and summarizes each metric over the
/// completed runs of the group. Order-insensitive.
pub fn aggregate(records: &[ExperimentRecord]) -> Result<Vec<SummaryRow>, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::NoRecords);
    }
    let mut keys: Vec<(RunKind, usize)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.kind, r.s)) {
            keys.push((r.kind, r.s));
        }
    }
    keys.sort_by_key(|&(kind, s)| (kind == RunKind::Dense, s));

    let mut rows = Vec::with_capacity(keys.len());
    for (kind, s) in keys {
        let group: Vec<&ExperimentRecord> = records
            .iter()
            .filter(|r| r.kind == kind && r.s == s)
            .collect();
        let outcomes: Vec<&RunOutcome> = group.iter().filter_map(|r| r.status.outcome()).collect();
        let metric = |f: &dyn Fn(&RunOutcome) -> f64| {
            MetricSummary::from_values(&outcomes.iter().map(|o| f(o)).collect::<Vec<_>>())
        };
        let stable_count = outcomes
            .iter()
            .filter(|o| o.stability.is_some_and(|st| st.is_stable))
            .count();
        let has_stability = outcomes.iter().any(|o| o.stability.is_some());
        rows.push(SummaryRow {
            kind,
            s,
            runs: group.len(),
            ok: outcomes.len(),
            stopped_by_loss: outcomes
                .iter()
                .filter(|o| o.stop_reason == StopReason::LossStop)
                .count(),
            stopped_by_cap: outcomes
                .iter()
                .filter(|o| o.stop_reason == StopReason::MaxSteps)
                .count(),
            stable_rate: (has_stability && !outcomes.is_empty())
                .then(|| stable_count as f64 / outcomes.len() as f64),
            gamma: metric(&|o| o.gamma),
            train_loss: metric(&|o| o.train_loss),
            test_loss: metric(&|o| o.test_loss),
            train_acc: metric(&|o| o.train_acc),
            test_acc: metric(&|o| o.test_acc),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::load_iris;
    use std::collections::HashSet;

    fn quick_protocol() -> Protocol {
        Protocol {
            n_monte: 20,
            max_steps: 300,
            loss_stop: 0.05,
            trace_every: 0,
        }
    }

    #[test]
    fn sparse_init_draws_the_requested_support_size() {
        for s in 1..15usize {
            let v = sparse_init(15, s, 21, 84);
            assert_eq!(v.support().len(), s, "s = {s}");
            assert_eq!(v.budget(), s);
        }
        // s = 14 leaves exactly one zero coordinate.
        let v = sparse_init(15, 14, 5, 6);
        let zeros = v.dense().iter().filter(|&&x| x == 0.0).count();
        assert_eq!(zeros, 1);
    }

    #[test]
    fn sparse_init_is_deterministic_and_seed_sensitive() {
        let a = sparse_init(15, 7, 21, 84);
        let b = sparse_init(15, 7, 21, 84);
        assert_eq!(a, b);
        // The support seed moves the support, the init seed moves the values.
        let other_support = sparse_init(15, 7, 21, 85);
        let other_init = sparse_init(15, 7, 22, 84);
        assert_ne!(a.support(), other_support.support());
        assert_eq!(a.support(), other_init.support());
        assert_ne!(a.dense(), other_init.dense());
    }

    #[test]
    fn sparse_and_dense_inits_share_the_value_stream() {
        // Same init seed: a full support must reproduce the dense draw on
        // the drawn coordinates in order.
        let dense = dense_init(15, 33);
        let sparse = sparse_init(15, 14, 33, 99);
        let kept: Vec<f64> = sparse.support().iter().map(|i| sparse.dense()[i]).collect();
        assert_eq!(&dense.as_slice()[..14], kept.as_slice());
    }

    #[test]
    fn single_sparse_run_is_deterministic_and_well_formed() {
        let dataset = load_iris(None).unwrap();
        let seeds_in = SeedTriple {
            data: 42,
            init: 21,
            support: 84,
        };
        let a = run_sparse_experiment(&dataset, seeds_in, 7, &quick_protocol());
        let b = run_sparse_experiment(&dataset, seeds_in, 7, &quick_protocol());
        assert_eq!(a, b);

        let outcome = a.record.status.outcome().expect("run should complete");
        assert!(outcome.gamma > 0.0 && outcome.gamma.is_finite());
        assert!(outcome.final_support.len() <= 7);
        assert!((0.0..=1.0).contains(&outcome.train_acc));
        assert!((0.0..=1.0).contains(&outcome.test_acc));
        assert!(outcome.train_loss.is_finite() && outcome.test_loss.is_finite());
        let report = outcome.stability.expect("sparse runs carry a report");
        assert!((report.margin
            - (report.min_abs_on_support - report.gamma * report.max_grad_off_support))
            .abs()
            < 1e-15);
    }

    #[test]
    fn standalone_estimate_matches_the_learning_rate_a_run_derives() {
        let dataset = load_iris(None).unwrap();
        let seeds_in = SeedTriple {
            data: 42,
            init: 21,
            support: 84,
        };
        let protocol = quick_protocol();
        let run = run_sparse_experiment(&dataset, seeds_in, 7, &protocol);
        let (est, gamma) =
            estimate_for_level(&dataset, seeds_in.data, seeds_in.init, 7, protocol.n_monte)
                .unwrap();
        assert_eq!(est.n_monte(), protocol.n_monte);
        assert_eq!(gamma, run.record.status.outcome().unwrap().gamma);
    }

    #[test]
    fn dense_baseline_completes_without_a_stability_report() {
        let dataset = load_iris(None).unwrap();
        let a = run_dense_baseline(&dataset, 42, 21, &quick_protocol());
        let b = run_dense_baseline(&dataset, 42, 21, &quick_protocol());
        assert_eq!(a, b);
        let outcome = a.record.status.outcome().expect("run should complete");
        assert!(outcome.stability.is_none());
        assert_eq!(a.record.kind, RunKind::Dense);
        assert_eq!(a.record.s, 15);
    }

    #[test]
    fn sweep_produces_the_expected_row_grid() {
        let dataset = load_iris(None).unwrap();
        let cfg = SweepConfig {
            runs_per_level: 2,
            levels: vec![3, 7],
            protocol: quick_protocol(),
            seed_master: 0,
            pair_data_seeds: false,
        };
        let mut calls = 0;
        let records = run_sweep(&dataset, &cfg, |_done, total| {
            calls += 1;
            assert_eq!(total, 6);
        })
        .unwrap();
        assert_eq!(calls, 6);
        assert_eq!(records.len(), 6);
        assert_eq!(
            records
                .iter()
                .filter(|r| r.kind == RunKind::Sparse)
                .count(),
            4
        );
        // Deterministic replay.
        let again = run_sweep(&dataset, &cfg, |_, _| {}).unwrap();
        assert_eq!(records, again);
    }

    #[test]
    fn unpaired_sweeps_draw_distinct_seed_triples() {
        let cfg = SweepConfig {
            runs_per_level: 10,
            levels: (1..=14).collect(),
            protocol: quick_protocol(),
            seed_master: 1,
            pair_data_seeds: false,
        };
        let mut seen = HashSet::new();
        for &s in &cfg.levels {
            for run in 0..cfg.runs_per_level {
                let t = sweep_seeds(&cfg, s, run);
                assert!(seen.insert((t.data, t.init, t.support)), "duplicate at ({s}, {run})");
            }
        }
    }

    #[test]
    fn paired_sweeps_share_data_seeds_across_levels_and_dense() {
        let cfg = SweepConfig {
            pair_data_seeds: true,
            ..SweepConfig::desk()
        };
        let at_three = sweep_seeds(&cfg, 3, 4);
        let at_nine = sweep_seeds(&cfg, 9, 4);
        assert_eq!(at_three.data, at_nine.data);
        assert_ne!(at_three.init, at_nine.init);
        let (dense_data, _) = dense_sweep_seeds(&cfg, 4);
        assert_eq!(dense_data, at_three.data);

        let unpaired = SweepConfig::desk();
        assert_ne!(
            sweep_seeds(&unpaired, 3, 4).data,
            sweep_seeds(&unpaired, 9, 4).data
        );
    }

    #[test]
    fn final_supports_move_across_seeds() {
        let dataset = load_iris(None).unwrap();
        let cfg = SweepConfig {
            runs_per_level: 8,
            levels: vec![7],
            protocol: quick_protocol(),
            seed_master: 2,
            pair_data_seeds: false,
        };
        let records = run_sweep(&dataset, &cfg, |_, _| {}).unwrap();
        let supports: HashSet<Vec<usize>> = records
            .iter()
            .filter(|r| r.kind == RunKind::Sparse)
            .filter_map(|r| r.status.outcome())
            .map(|o| o.final_support.indices().to_vec())
            .collect();
        assert!(supports.len() >= 2, "only {} distinct supports", supports.len());
    }

    #[test]
    fn sweep_validates_configuration() {
        let dataset = load_iris(None).unwrap();
        let mut cfg = SweepConfig::desk();
        cfg.runs_per_level = 0;
        assert_eq!(
            run_sweep(&dataset, &cfg, |_, _| {}).unwrap_err(),
            ExperimentError::NoRuns
        );
        let mut cfg = SweepConfig::desk();
        cfg.levels = vec![15];
        assert_eq!(
            run_sweep(&dataset, &cfg, |_, _| {}).unwrap_err(),
            ExperimentError::BadLevel { s: 15, max: 14 }
        );
        let mut cfg = SweepConfig::desk();
        cfg.levels.clear();
        assert_eq!(
            run_sweep(&dataset, &cfg, |_, _| {}).unwrap_err(),
            ExperimentError::NoLevels
        );
    }

    #[test]
    fn quantiles_interpolate_linearly() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&sorted, 0.0), 1.0);
        assert_eq!(quantile(&sorted, 1.0), 4.0);
        assert_eq!(quantile(&sorted, 0.5), 2.5);
        assert_eq!(quantile(&sorted, 0.25), 1.75);
        assert_eq!(quantile(&[5.0], 0.75), 5.0);
    }

    #[test]
    fn aggregate_of_a_single_record_echoes_its_values() {
        let dataset = load_iris(None).unwrap();
        let seeds_in = SeedTriple {
            data: 1,
            init: 2,
            support: 3,
        };
        let run = run_sparse_experiment(&dataset, seeds_in, 5, &quick_protocol());
        let outcome = run.record.status.outcome().unwrap().clone();
        let rows = aggregate(std::slice::from_ref(&run.record)).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.runs, 1);
        assert_eq!(row.ok, 1);
        for stat in [
            row.gamma.min,
            row.gamma.q1,
            row.gamma.median,
            row.gamma.q3,
            row.gamma.max,
            row.gamma.mean,
        ] {
            assert_eq!(stat, outcome.gamma);
        }
        assert_eq!(row.train_loss.median, outcome.train_loss);
    }

    #[test]
    fn aggregate_is_order_insensitive_and_groups_by_kind_and_level() {
        let dataset = load_iris(None).unwrap();
        let cfg = SweepConfig {
            runs_per_level: 3,
            levels: vec![4, 8],
            protocol: quick_protocol(),
            seed_master: 5,
            pair_data_seeds: false,
        };
        let records = run_sweep(&dataset, &cfg, |_, _| {}).unwrap();
        let forward = aggregate(&records).unwrap();
        let mut reversed_records = records.clone();
        reversed_records.reverse();
        let reversed = aggregate(&reversed_records).unwrap();
        assert_eq!(forward, reversed);
        assert_eq!(forward.len(), 3);
        assert_eq!(forward[0].s, 4);
        assert_eq!(forward[1].s, 8);
        assert_eq!(forward[2].kind, RunKind::Dense);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn failure_reasons_are_single_tokens() {
        let err = ExperimentError::BadLevel { s: 99, max: 14 };
        let token = failure_reason(&err);
        assert!(!token.contains(',') && !token.contains(' '), "got {token:?}");
        assert!(!token.is_empty());
    }
}
