//! CSV serialization for records, summaries, traces, and parameter tables.
//!
//! One dialect everywhere: comma separators, `.` decimal point, LF line
//! endings, a `#` comment line documenting the layout, then a header row.
//! Floats are written with 9 significant digits, so a file re-written from
//! its own parse is byte-identical.

use crate::experiments::{
    ExperimentRecord, MetricSummary, RunKind, RunOutcome, RunStatus, SeedTriple, SummaryRow,
};
use crate::linalg::Vector;
use crate::optim::{StopReason, Trace};
use crate::stability::StabilityReport;
use crate::thresholding::Support;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no data rows found")]
    Empty,
}

/// 9 significant digits; enough to compare runs, stable across rewrites.
/// Every CSV this crate or its callers emit should format floats this way so
/// files re-written from their own parse stay byte-identical.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

fn fmt(x: f64) -> String {
    fmt_float(x)
}

fn parse_f64(field: &str, line: usize, what: &str) -> Result<f64, ReportError> {
    field.parse::<f64>().map_err(|_| ReportError::Parse {
        line,
        msg: format!("bad {what} value {field:?}"),
    })
}

fn parse_usize(field: &str, line: usize, what: &str) -> Result<usize, ReportError> {
    field.parse::<usize>().map_err(|_| ReportError::Parse {
        line,
        msg: format!("bad {what} value {field:?}"),
    })
}

fn parse_u64(field: &str, line: usize, what: &str) -> Result<u64, ReportError> {
    field.parse::<u64>().map_err(|_| ReportError::Parse {
        line,
        msg: format!("bad {what} value {field:?}"),
    })
}

const RECORD_COLUMNS: &str = "kind,s,data_seed,init_seed,support_seed,status,gamma,stop_reason,steps,train_loss,test_loss,train_acc,test_acc,min_abs_support,max_grad_off,stable,margin,final_support,final_theta";
const RECORD_FIELDS: usize = 19;

/// Serializes records in a fixed column order. Failed rows keep their seed
/// and status columns and leave every metric empty.
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    out.push_str("# one training run per row; floats use 9 significant digits; final_support is space-separated coordinate indices; final_theta is semicolon-separated parameter values\n");
    out.push_str(RECORD_COLUMNS);
    out.push('\n');
    for r in records {
        let seeds = r.seeds;
        match &r.status {
            RunStatus::Ok(o) => {
                let (min_abs, max_off, stable, margin) = match &o.stability {
                    Some(st) => (
                        fmt(st.min_abs_on_support),
                        fmt(st.max_grad_off_support),
                        st.is_stable.to_string(),
                        fmt(st.margin),
                    ),
                    None => (String::new(), String::new(), String::new(), String::new()),
                };
                let support = o
                    .final_support
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                let theta = o
                    .final_theta
                    .iter()
                    .map(|&x| fmt(x))
                    .collect::<Vec<_>>()
                    .join(";");
                out.push_str(&format!(
                    "{},{},{},{},{},ok,{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.kind,
                    r.s,
                    seeds.data,
                    seeds.init,
                    seeds.support,
                    fmt(o.gamma),
                    o.stop_reason,
                    o.steps,
                    fmt(o.train_loss),
                    fmt(o.test_loss),
                    fmt(o.train_acc),
                    fmt(o.test_acc),
                    min_abs,
                    max_off,
                    stable,
                    margin,
                    support,
                    theta
                ));
            }
            RunStatus::Failed { reason } => {
                out.push_str(&format!(
                    "{},{},{},{},{},failed:{reason},,,,,,,,,,,,,\n",
                    r.kind, r.s, seeds.data, seeds.init, seeds.support
                ));
            }
        }
    }
    out
}

/// Parses the format written by [`records_to_csv`]. Values carry the file's
/// 9-digit precision.
pub fn parse_records_csv(text: &str) -> Result<Vec<ExperimentRecord>, ReportError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("kind,") {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != RECORD_FIELDS {
            return Err(ReportError::Parse {
                line,
                msg: format!("expected {RECORD_FIELDS} fields, got {}", fields.len()),
            });
        }
        let kind = match fields[0] {
            "sparse" => RunKind::Sparse,
            "dense" => RunKind::Dense,
            other => {
                return Err(ReportError::Parse {
                    line,
                    msg: format!("unknown run kind {other:?}"),
                })
            }
        };
        let s = parse_usize(fields[1], line, "sparsity")?;
        let seeds = SeedTriple {
            data: parse_u64(fields[2], line, "data seed")?,
            init: parse_u64(fields[3], line, "init seed")?,
            support: parse_u64(fields[4], line, "support seed")?,
        };
        let status = if fields[5] == "ok" {
            let stop_reason = match fields[7] {
                "loss_stop" => StopReason::LossStop,
                "max_steps" => StopReason::MaxSteps,
                other => {
                    return Err(ReportError::Parse {
                        line,
                        msg: format!("unknown stop reason {other:?}"),
                    })
                }
            };
            let stability = if fields[13].is_empty() {
                None
            } else {
                let gamma = parse_f64(fields[6], line, "gamma")?;
                let min_abs = parse_f64(fields[13], line, "min_abs_support")?;
                let max_off = parse_f64(fields[14], line, "max_grad_off")?;
                let is_stable = match fields[15] {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(ReportError::Parse {
                            line,
                            msg: format!("bad stable flag {other:?}"),
                        })
                    }
                };
                Some(StabilityReport {
                    min_abs_on_support: min_abs,
                    max_grad_off_support: max_off,
                    gamma,
                    margin: parse_f64(fields[16], line, "margin")?,
                    is_stable,
                })
            };
            let support_indices = if fields[17].is_empty() {
                Vec::new()
            } else {
                fields[17]
                    .split(' ')
                    .map(|t| parse_usize(t, line, "support index"))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let final_support = Support::new(support_indices).map_err(|e| ReportError::Parse {
                line,
                msg: e.to_string(),
            })?;
            let theta_values = fields[18]
                .split(';')
                .map(|t| parse_f64(t, line, "parameter"))
                .collect::<Result<Vec<_>, _>>()?;
            RunStatus::Ok(RunOutcome {
                gamma: parse_f64(fields[6], line, "gamma")?,
                stop_reason,
                steps: parse_usize(fields[8], line, "steps")?,
                train_loss: parse_f64(fields[9], line, "train_loss")?,
                test_loss: parse_f64(fields[10], line, "test_loss")?,
                train_acc: parse_f64(fields[11], line, "train_acc")?,
                test_acc: parse_f64(fields[12], line, "test_acc")?,
                stability,
                final_support,
                final_theta: Vector::new(theta_values),
            })
        } else if let Some(reason) = fields[5].strip_prefix("failed:") {
            RunStatus::Failed {
                reason: reason.to_string(),
            }
        } else {
            return Err(ReportError::Parse {
                line,
                msg: format!("unknown status {:?}", fields[5]),
            });
        };
        records.push(ExperimentRecord {
            kind,
            s,
            seeds,
            status,
        });
    }
    if records.is_empty() {
        return Err(ReportError::Empty);
    }
    Ok(records)
}

fn summary_metric_columns(name: &str) -> String {
    ["min", "q1", "median", "q3", "max", "mean"]
        .iter()
        .map(|stat| format!("{name}_{stat}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn summary_metric_values(m: &MetricSummary) -> String {
    [m.min, m.q1, m.median, m.q3, m.max, m.mean]
        .iter()
        .map(|&x| fmt(x))
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes per-level summaries, one row per (kind, sparsity) group.
pub fn summary_to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str("# one (kind, sparsity) group per row; statistics are over completed runs only; floats use 9 significant digits\n");
    out.push_str("kind,s,runs,ok,stopped_by_loss,stopped_by_cap,stable_rate");
    for name in ["gamma", "train_loss", "test_loss", "train_acc", "test_acc"] {
        out.push(',');
        out.push_str(&summary_metric_columns(name));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            row.kind,
            row.s,
            row.runs,
            row.ok,
            row.stopped_by_loss,
            row.stopped_by_cap,
            row.stable_rate.map(fmt).unwrap_or_default()
        ));
        for m in [
            &row.gamma,
            &row.train_loss,
            &row.test_loss,
            &row.train_acc,
            &row.test_acc,
        ] {
            out.push(',');
            out.push_str(&summary_metric_values(m));
        }
        out.push('\n');
    }
    out
}

/// Serializes a trace, one recorded iterate per row.
pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = String::new();
    out.push_str("# one recorded iterate per row; support is space-separated coordinate indices\n");
    out.push_str("step,loss,grad_norm,support,support_changed\n");
    for step in trace.steps() {
        let support = step
            .support
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            step.step,
            fmt(step.loss),
            fmt(step.grad_norm),
            support,
            step.support_changed
        ));
    }
    out
}

/// Serializes a parameter vector as a bar-chart-ready (name, value) table.
pub fn params_to_csv(names: &[String], theta: &Vector) -> String {
    assert_eq!(names.len(), theta.dim(), "one name per coordinate");
    let mut out = String::new();
    out.push_str("# final parameter values by coordinate name\n");
    out.push_str("param,value\n");
    for (name, &value) in names.iter().zip(theta.iter()) {
        out.push_str(&format!("{name},{}\n", fmt(value)));
    }
    out
}

/// Writes `content` to `path`, creating parent directories as needed.
pub fn write_text(path: &Path, content: &str) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| ReportError::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, content).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_records_csv(path: &Path) -> Result<Vec<ExperimentRecord>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_records_csv(&text)
}
