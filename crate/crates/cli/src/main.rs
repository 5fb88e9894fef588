//! Command-line front end: single training runs, smoothness estimation,
//! sparsity sweeps, stability certification, and figure emission.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 flag or usage error.

mod plot;

use clap::{Args, Parser, Subcommand};
use iht_core::data::{load_iris, split_and_standardize, DataError};
use iht_core::experiments::{
    aggregate, estimate_for_level, quantile, run_dense_baseline, run_sparse_experiment, run_sweep,
    ExperimentError, ExperimentRecord, MetricSummary, Protocol, RunKind, RunStatus, SeedTriple,
    SummaryRow, SweepConfig,
};
use iht_core::objectives::{ClassifierObjective, Objective, ObjectiveError, OneLayerClassifier};
use iht_core::report::{
    fmt_float, params_to_csv, read_records_csv, records_to_csv, summary_to_csv, trace_to_csv,
    write_text, ReportError,
};
use iht_core::rss::RssError;
use iht_core::stability::{check_eps_optimality, check_ht_stable, StabilityError};
use iht_core::thresholding::ThresholdingError;
use iht_core::SparseVector;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Rss(#[from] RssError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Thresholding(#[from] ThresholdingError),
    #[error("run failed: {0}")]
    RunFailed(String),
    #[error("{0}")]
    BadSelection(String),
}

/// Sparse training experiments: iterative hard thresholding with a
/// smoothness-derived learning rate on the embedded iris task.
#[derive(Parser)]
#[command(name = "iht", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one sparse model with iterative hard thresholding.
    TrainSparse(TrainSparseArgs),
    /// Train one dense baseline with plain gradient descent.
    TrainDense(TrainDenseArgs),
    /// Estimate the restricted smoothness modulus and its learning rate.
    EstimateL2s(EstimateL2sArgs),
    /// Run sparse training across sparsity levels plus the dense baseline.
    Sweep(SweepArgs),
    /// Re-derive a recorded run's stability report and loss-closeness verdict.
    Certify(CertifyArgs),
    /// Render sweep records into SVG figures with companion CSVs.
    Plot(PlotArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Iris CSV to load instead of the embedded copy.
    #[arg(long, value_name = "FILE")]
    iris: Option<PathBuf>,
    /// Directory that receives every output file.
    #[arg(long, env = "IHT_OUT_DIR", default_value = "out", value_name = "DIR")]
    out_dir: PathBuf,
}

fn finite_f64(text: &str) -> Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("{text:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".to_string())
    }
}

fn non_negative_f64(text: &str) -> Result<f64, String> {
    let v = finite_f64(text)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("must be non-negative".to_string())
    }
}

#[derive(Args)]
struct TrainSparseArgs {
    /// Nonzero-parameter budget, 1..=14 for the 15-parameter iris model.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=14))]
    sparsity: u64,
    /// Train/test split seed.
    #[arg(long, default_value_t = 42)]
    seed_data: u64,
    /// Initial-value seed; also feeds the smoothness-estimate trials.
    #[arg(long, default_value_t = 21)]
    seed_init: u64,
    /// Initial-support seed.
    #[arg(long, default_value_t = 84)]
    seed_support: u64,
    /// Step cap.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Stop once the training loss reaches this value; negative disables.
    #[arg(long, default_value_t = 0.05, value_parser = finite_f64)]
    loss_stop: f64,
    /// Monte Carlo trials behind the learning-rate estimate.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_monte: u64,
    /// Record every k-th step in the trace; 0 keeps only the final row.
    #[arg(long, default_value_t = 1)]
    trace_every: u64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct TrainDenseArgs {
    /// Train/test split seed.
    #[arg(long, default_value_t = 42)]
    seed_data: u64,
    /// Initial-value seed; also feeds the smoothness-estimate trials.
    #[arg(long, default_value_t = 21)]
    seed_init: u64,
    /// Step cap.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Stop once the training loss reaches this value; negative disables.
    #[arg(long, default_value_t = 0.05, value_parser = finite_f64)]
    loss_stop: f64,
    /// Monte Carlo trials behind the learning-rate estimate.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_monte: u64,
    /// Record every k-th step in the trace; 0 keeps only the final row.
    #[arg(long, default_value_t = 1)]
    trace_every: u64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct EstimateL2sArgs {
    /// Sparsity level; 15 estimates the unrestricted dense modulus.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=15))]
    sparsity: u64,
    /// Train/test split seed; the estimate runs on the training split.
    #[arg(long, default_value_t = 42)]
    seed_data: u64,
    /// Seed of the trial stream.
    #[arg(long, default_value_t = 21)]
    seed_init: u64,
    /// Monte Carlo trial count.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_monte: u64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Runs per sparsity level, and for the dense baseline.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// Sparsity levels to run, comma-separated; all of 1..=14 when absent.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..=14))]
    sparsity: Vec<u64>,
    /// Step cap per run.
    #[arg(long, default_value_t = 2_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Stop once the training loss reaches this value; negative disables.
    #[arg(long, default_value_t = 0.05, value_parser = finite_f64)]
    loss_stop: f64,
    /// Monte Carlo trials behind each learning-rate estimate.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_monte: u64,
    /// Root seed from which every run's seed triple derives.
    #[arg(long, default_value_t = 0)]
    seed_master: u64,
    /// Reuse run r's data seed at every level and in the dense baseline.
    #[arg(long)]
    pair_data_seeds: bool,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct CertifyArgs {
    /// Records file; defaults to <out-dir>/records.csv.
    #[arg(long, value_name = "FILE")]
    records: Option<PathBuf>,
    /// Data row to certify, counting from 0; default: first completed sparse row.
    #[arg(long)]
    index: Option<usize>,
    /// Loss slack for the closeness verdict.
    #[arg(long, default_value_t = 0.02, value_parser = non_negative_f64)]
    eps: f64,
    /// Dense reference loss; default: median of the file's completed dense
    /// rows, else a fresh baseline run with the record's data and init seeds.
    #[arg(long, value_parser = finite_f64)]
    dense_loss: Option<f64>,
    /// Step cap for the fallback dense baseline run.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Monte Carlo trials for the fallback dense baseline run.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_monte: u64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// Records file; defaults to <out-dir>/records.csv.
    #[arg(long, value_name = "FILE")]
    records: Option<PathBuf>,
    /// Data row whose parameters feed the bar chart, counting from 0;
    /// default: first completed sparse row.
    #[arg(long)]
    index: Option<usize>,
    #[command(flatten)]
    io: IoArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::TrainSparse(args) => cmd_train_sparse(args),
        Command::TrainDense(args) => cmd_train_dense(args),
        Command::EstimateL2s(args) => cmd_estimate_l2s(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// One labeled line per record, floats at full file precision.
fn record_line(record: &ExperimentRecord) -> String {
    let mut line = format!(
        "kind={} s={} seed_data={} seed_init={} seed_support={}",
        record.kind, record.s, record.seeds.data, record.seeds.init, record.seeds.support
    );
    match &record.status {
        RunStatus::Ok(o) => {
            line.push_str(&format!(
                " status=ok gamma={} stop_reason={} steps={} train_loss={} test_loss={} train_acc={} test_acc={}",
                fmt_float(o.gamma),
                o.stop_reason,
                o.steps,
                fmt_float(o.train_loss),
                fmt_float(o.test_loss),
                fmt_float(o.train_acc),
                fmt_float(o.test_acc),
            ));
            if let Some(st) = &o.stability {
                line.push_str(&format!(
                    " stable={} margin={}",
                    st.is_stable,
                    fmt_float(st.margin)
                ));
            }
        }
        RunStatus::Failed { reason } => {
            line.push_str(&format!(" status=failed reason={reason}"));
        }
    }
    line
}

fn cmd_train_sparse(args: TrainSparseArgs) -> Result<(), CliError> {
    let dataset = load_iris(args.io.iris.as_deref())?;
    let protocol = Protocol {
        n_monte: args.n_monte as usize,
        max_steps: args.max_steps as usize,
        loss_stop: args.loss_stop,
        trace_every: args.trace_every as usize,
    };
    let seeds = SeedTriple {
        data: args.seed_data,
        init: args.seed_init,
        support: args.seed_support,
    };
    let s = args.sparsity as usize;
    let arts = run_sparse_experiment(&dataset, seeds, s, &protocol);
    let outcome = match &arts.record.status {
        RunStatus::Ok(o) => o,
        RunStatus::Failed { reason } => return Err(CliError::RunFailed(reason.clone())),
    };

    let tag = format!("s{}-d{}-i{}-p{}", s, seeds.data, seeds.init, seeds.support);
    let out = &args.io.out_dir;
    let run_path = out.join(format!("run-{tag}.csv"));
    write_text(&run_path, &records_to_csv(std::slice::from_ref(&arts.record)))?;
    let trace_path = out.join(format!("trace-{tag}.csv"));
    if let Some(trace) = &arts.trace {
        write_text(&trace_path, &trace_to_csv(trace))?;
    }
    let params_path = out.join(format!("params-{tag}.csv"));
    let names = OneLayerClassifier::iris().param_names();
    write_text(&params_path, &params_to_csv(&names, &outcome.final_theta))?;

    println!("{}", record_line(&arts.record));
    eprintln!("wrote {}", run_path.display());
    eprintln!("wrote {}", trace_path.display());
    eprintln!("wrote {}", params_path.display());
    Ok(())
}

fn cmd_train_dense(args: TrainDenseArgs) -> Result<(), CliError> {
    let dataset = load_iris(args.io.iris.as_deref())?;
    let protocol = Protocol {
        n_monte: args.n_monte as usize,
        max_steps: args.max_steps as usize,
        loss_stop: args.loss_stop,
        trace_every: args.trace_every as usize,
    };
    let arts = run_dense_baseline(&dataset, args.seed_data, args.seed_init, &protocol);
    let outcome = match &arts.record.status {
        RunStatus::Ok(o) => o,
        RunStatus::Failed { reason } => return Err(CliError::RunFailed(reason.clone())),
    };

    let tag = format!("dense-d{}-i{}", args.seed_data, args.seed_init);
    let out = &args.io.out_dir;
    let run_path = out.join(format!("run-{tag}.csv"));
    write_text(&run_path, &records_to_csv(std::slice::from_ref(&arts.record)))?;
    let trace_path = out.join(format!("trace-{tag}.csv"));
    if let Some(trace) = &arts.trace {
        write_text(&trace_path, &trace_to_csv(trace))?;
    }
    let params_path = out.join(format!("params-{tag}.csv"));
    let names = OneLayerClassifier::iris().param_names();
    write_text(&params_path, &params_to_csv(&names, &outcome.final_theta))?;

    println!("{}", record_line(&arts.record));
    eprintln!("wrote {}", run_path.display());
    eprintln!("wrote {}", trace_path.display());
    eprintln!("wrote {}", params_path.display());
    Ok(())
}

fn cmd_estimate_l2s(args: EstimateL2sArgs) -> Result<(), CliError> {
    let dataset = load_iris(args.io.iris.as_deref())?;
    let s = args.sparsity as usize;
    let (est, gamma) = estimate_for_level(
        &dataset,
        args.seed_data,
        args.seed_init,
        s,
        args.n_monte as usize,
    )?;

    let tag = format!("s{}-d{}-i{}-m{}", s, args.seed_data, args.seed_init, args.n_monte);
    let trials_path = args.io.out_dir.join(format!("l2s-trials-{tag}.csv"));
    let mut csv = String::from("# one smoothness-ratio sample per trial\ntrial,ratio\n");
    for (i, &r) in est.trials().iter().enumerate() {
        csv.push_str(&format!("{i},{}\n", fmt_float(r)));
    }
    write_text(&trials_path, &csv)?;

    println!(
        "s={} n_monte={} l_hat={} gamma={}",
        est.s(),
        est.n_monte(),
        fmt_float(est.l_hat()),
        fmt_float(gamma)
    );
    eprintln!("wrote {}", trials_path.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let dataset = load_iris(args.io.iris.as_deref())?;
    let levels: Vec<usize> = if args.sparsity.is_empty() {
        (1..=14).collect()
    } else {
        args.sparsity.iter().map(|&v| v as usize).collect()
    };
    let cfg = SweepConfig {
        runs_per_level: args.runs as usize,
        levels,
        protocol: Protocol {
            n_monte: args.n_monte as usize,
            max_steps: args.max_steps as usize,
            loss_stop: args.loss_stop,
            trace_every: 0,
        },
        seed_master: args.seed_master,
        pair_data_seeds: args.pair_data_seeds,
    };

    let per_level = cfg.runs_per_level;
    let records = run_sweep(&dataset, &cfg, |done, total| {
        if done % per_level == 0 || done == total {
            eprintln!("progress: {done}/{total} runs");
        }
    })?;
    let rows = aggregate(&records)?;

    let records_path = args.io.out_dir.join("records.csv");
    write_text(&records_path, &records_to_csv(&records))?;
    let summary_path = args.io.out_dir.join("summary.csv");
    write_text(&summary_path, &summary_to_csv(&rows))?;

    println!("kind      s    ok/runs  hit_stop  stable  gamma_med   train_med   test_med    acc_med");
    for row in &rows {
        let stable = row
            .stable_rate
            .map(|r| format!("{r:.2}"))
            .unwrap_or_else(|| "-".to_string());
        println!(
            "{:<8} {:>3} {:>5}/{:<4} {:>8} {:>7}  {:<11} {:<11} {:<11} {:<7}",
            row.kind.to_string(),
            row.s,
            row.ok,
            row.runs,
            row.stopped_by_loss,
            stable,
            format!("{:.5}", row.gamma.median),
            format!("{:.5}", row.train_loss.median),
            format!("{:.5}", row.test_loss.median),
            format!("{:.4}", row.test_acc.median),
        );
    }
    eprintln!("wrote {}", records_path.display());
    eprintln!("wrote {}", summary_path.display());
    Ok(())
}

/// Picks the record a certify/plot selector refers to.
fn select_record<'a>(
    records: &'a [ExperimentRecord],
    index: Option<usize>,
) -> Result<(usize, &'a ExperimentRecord), CliError> {
    match index {
        Some(i) => records
            .get(i)
            .map(|r| (i, r))
            .ok_or_else(|| {
                CliError::BadSelection(format!(
                    "row {i} is out of range; the file has {} data rows",
                    records.len()
                ))
            }),
        None => records
            .iter()
            .enumerate()
            .find(|(_, r)| r.kind == RunKind::Sparse && matches!(r.status, RunStatus::Ok(_)))
            .ok_or_else(|| {
                CliError::BadSelection(
                    "no completed sparse row found; pass --index to pick one".to_string(),
                )
            }),
    }
}

fn cmd_certify(args: CertifyArgs) -> Result<(), CliError> {
    let path = args
        .records
        .unwrap_or_else(|| args.io.out_dir.join("records.csv"));
    let records = read_records_csv(&path)?;
    let (index, record) = select_record(&records, args.index)?;
    let outcome = match &record.status {
        RunStatus::Ok(o) => o,
        RunStatus::Failed { reason } => {
            return Err(CliError::BadSelection(format!(
                "row {index} did not complete ({reason}); nothing to certify"
            )))
        }
    };
    if record.kind != RunKind::Sparse {
        return Err(CliError::BadSelection(format!(
            "row {index} is the dense baseline; the stability check applies to sparse rows"
        )));
    }

    let dataset = load_iris(args.io.iris.as_deref())?;
    let prep = split_and_standardize(&dataset, record.seeds.data);
    let obj = ClassifierObjective::new(OneLayerClassifier::iris(), prep.train.clone())?;
    let grad = obj.gradient(&outcome.final_theta)?;
    let point = SparseVector::from_dense(outcome.final_theta.clone(), record.s)?;
    let report = check_ht_stable(&point, &grad, outcome.gamma)?;
    let matches_stored = outcome.stability.as_ref().is_some_and(|st| {
        st.is_stable == report.is_stable
            && (st.margin - report.margin).abs() <= 1e-6 * report.margin.abs().max(1.0)
    });

    let sparse_loss = obj.value(&outcome.final_theta)?;
    let (dense_loss, source) = match args.dense_loss {
        Some(v) => (v, "flag".to_string()),
        None => {
            let mut dense_losses: Vec<f64> = records
                .iter()
                .filter(|r| r.kind == RunKind::Dense)
                .filter_map(|r| r.status.outcome())
                .map(|o| o.train_loss)
                .collect();
            if dense_losses.is_empty() {
                let protocol = Protocol {
                    n_monte: args.n_monte as usize,
                    max_steps: args.max_steps as usize,
                    loss_stop: 0.05,
                    trace_every: 0,
                };
                let baseline =
                    run_dense_baseline(&dataset, record.seeds.data, record.seeds.init, &protocol);
                match baseline.record.status {
                    RunStatus::Ok(o) => (o.train_loss, "baseline-run".to_string()),
                    RunStatus::Failed { reason } => return Err(CliError::RunFailed(reason)),
                }
            } else {
                dense_losses.sort_by(f64::total_cmp);
                (quantile(&dense_losses, 0.5), "records-median".to_string())
            }
        }
    };
    let satisfied = check_eps_optimality(dense_loss, sparse_loss, args.eps);

    println!("record[{index}]: {}", record_line(record));
    println!(
        "stability: min_abs_on_support={} max_grad_off_support={} gamma={} margin={} stable={} matches_stored={}",
        fmt_float(report.min_abs_on_support),
        fmt_float(report.max_grad_off_support),
        fmt_float(report.gamma),
        fmt_float(report.margin),
        report.is_stable,
        matches_stored
    );
    println!(
        "eps_optimality: sparse_loss={} dense_loss={} dense_source={} eps={} satisfied={}",
        fmt_float(sparse_loss),
        fmt_float(dense_loss),
        source,
        fmt_float(args.eps),
        satisfied
    );
    Ok(())
}

fn summary_series_csv(rows: &[&SummaryRow], get: fn(&SummaryRow) -> MetricSummary) -> String {
    let mut out =
        String::from("# per-level distribution of the figure's metric over completed runs\n");
    out.push_str("kind,s,min,q1,median,q3,max,mean\n");
    for row in rows {
        let m = get(row);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.kind,
            row.s,
            fmt_float(m.min),
            fmt_float(m.q1),
            fmt_float(m.median),
            fmt_float(m.q3),
            fmt_float(m.max),
            fmt_float(m.mean)
        ));
    }
    out
}

fn cmd_plot(args: PlotArgs) -> Result<(), CliError> {
    let path = args
        .records
        .unwrap_or_else(|| args.io.out_dir.join("records.csv"));
    let records = read_records_csv(&path)?;
    let rows = aggregate(&records)?;
    let sparse_rows: Vec<&SummaryRow> = rows
        .iter()
        .filter(|r| r.kind == RunKind::Sparse && r.ok > 0)
        .collect();
    let dense_row: Option<&SummaryRow> = rows
        .iter()
        .find(|r| r.kind == RunKind::Dense && r.ok > 0);
    if sparse_rows.is_empty() {
        return Err(CliError::BadSelection(
            "records contain no completed sparse runs to plot".to_string(),
        ));
    }

    type Getter = fn(&SummaryRow) -> MetricSummary;
    let figures: [(&str, &str, &str, Getter); 5] = [
        (
            "learning-rate",
            "Learning rate by sparsity level",
            "learning rate",
            |r| r.gamma,
        ),
        (
            "train-loss",
            "Final training loss by sparsity level",
            "training loss",
            |r| r.train_loss,
        ),
        (
            "test-loss",
            "Test loss by sparsity level",
            "test loss",
            |r| r.test_loss,
        ),
        (
            "train-acc",
            "Training accuracy by sparsity level",
            "training accuracy",
            |r| r.train_acc,
        ),
        (
            "test-acc",
            "Test accuracy by sparsity level",
            "test accuracy",
            |r| r.test_acc,
        ),
    ];

    let mut written = Vec::new();
    for (name, title, y_label, get) in figures {
        let series = plot::BandSeries {
            xs: sparse_rows.iter().map(|r| r.s as f64).collect(),
            q1: sparse_rows.iter().map(|r| get(r).q1).collect(),
            median: sparse_rows.iter().map(|r| get(r).median).collect(),
            q3: sparse_rows.iter().map(|r| get(r).q3).collect(),
        };
        let svg = plot::line_plot_svg(&plot::LinePlot {
            title: title.to_string(),
            x_label: "sparsity level s".to_string(),
            y_label: y_label.to_string(),
            series,
            reference: dense_row.map(|d| ("dense median".to_string(), get(d).median)),
        });
        let svg_path = args.io.out_dir.join(format!("fig-{name}.svg"));
        write_text(&svg_path, &svg)?;
        written.push(svg_path);

        let mut csv_rows = sparse_rows.clone();
        if let Some(d) = dense_row {
            csv_rows.push(d);
        }
        let csv_path = args.io.out_dir.join(format!("fig-{name}.csv"));
        write_text(&csv_path, &summary_series_csv(&csv_rows, get))?;
        written.push(csv_path);
    }

    let (index, record) = select_record(&records, args.index)?;
    let outcome = match &record.status {
        RunStatus::Ok(o) => o,
        RunStatus::Failed { reason } => {
            return Err(CliError::BadSelection(format!(
                "row {index} did not complete ({reason}); cannot chart its parameters"
            )))
        }
    };
    let names = OneLayerClassifier::iris().param_names();
    let title = format!(
        "Final parameters: {} s={} seeds {}/{}/{}",
        record.kind, record.s, record.seeds.data, record.seeds.init, record.seeds.support
    );
    let svg = plot::bar_chart_svg(&title, "parameter value", &names, outcome.final_theta.as_slice());
    let svg_path = args.io.out_dir.join("fig-params.svg");
    write_text(&svg_path, &svg)?;
    written.push(svg_path);
    let csv_path = args.io.out_dir.join("fig-params.csv");
    write_text(&csv_path, &params_to_csv(&names, &outcome.final_theta))?;
    written.push(csv_path);

    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
