//! Result tables and plot-ready CSVs from persisted metrics.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::MetricsReport;

use super::config::ModelName;
use super::extract::read_json;

const COLUMN_TITLES: [&str; 6] = ["PR-AUC", "ROC-AUC", "F1", "MCC", "BalAcc", "Brier"];
const REGIMES: [&str; 3] = ["baseline", "advanced", "mixed"];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub spec: String,
    pub model: String,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub tables: Vec<PathBuf>,
    pub long_csv: PathBuf,
    pub trend_csv: PathBuf,
    pub n_results: usize,
}

fn spec_rank(spec: &str) -> (usize, String) {
    let i = REGIMES.iter().position(|&r| r == spec).unwrap_or(REGIMES.len());
    (i, spec.to_string())
}

fn model_rank(model: &str) -> (usize, String) {
    let i = model.parse::<ModelName>().map_or(ModelName::ALL.len(), |m| m as usize);
    (i, model.to_string())
}

fn subdirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(format!("listing {}", dir.display()), e))? {
        let path = entry.map_err(|e| Error::io(format!("listing {}", dir.display()), e))?.path();
        if path.is_dir() {
            out.push(path);
        }
    }
    Ok(out)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Every `runs/{spec}/{model}/metrics.json` below `out_dir`, in table order.
pub fn collect_results(out_dir: &Path) -> Result<Vec<ResultRow>> {
    let runs = out_dir.join("runs");
    let mut rows = Vec::new();
    if runs.is_dir() {
        for spec_dir in subdirs(&runs)? {
            for model_dir in subdirs(&spec_dir)? {
                let path = model_dir.join("metrics.json");
                if path.is_file() {
                    rows.push(ResultRow {
                        spec: file_name(&spec_dir),
                        model: file_name(&model_dir),
                        metrics: read_json(&path)?,
                    });
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::NoResults(runs));
    }
    rows.sort_by_key(|r| (spec_rank(&r.spec), model_rank(&r.model)));
    Ok(rows)
}

fn metric_values(m: &MetricsReport) -> [f64; 6] {
    MetricsReport::METRICS.map(|k| m.metric(k).expect("known metric"))
}

/// Markdown table for one spec. Cells equal to the column's best at four decimals are bold (lowest wins for Brier).
pub fn markdown_table(rows: &[&ResultRow]) -> String {
    let values: Vec<[f64; 6]> = rows.iter().map(|r| metric_values(&r.metrics)).collect();
    let best: Vec<f64> = (0..6)
        .map(|j| {
            let col = values.iter().map(|v| v[j]);
            if j == 5 {
                col.fold(f64::INFINITY, f64::min)
            } else {
                col.fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect();
    let mut s = format!("| Model | {} |\n|---|{}\n", COLUMN_TITLES.join(" | "), "---:|".repeat(6));
    for (row, v) in rows.iter().zip(&values) {
        s.push_str(&format!("| {} |", row.model));
        for j in 0..6 {
            let cell = format!("{:.4}", v[j]);
            if cell == format!("{:.4}", best[j]) {
                s.push_str(&format!(" **{cell}** |"));
            } else {
                s.push_str(&format!(" {cell} |"));
            }
        }
        s.push('\n');
    }
    s
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(Error::from)
}

/// Writes per-spec tables, the long-format metric CSV and the balanced-accuracy trend CSV.
pub fn write_report(out_dir: &Path) -> Result<ReportFiles> {
    let rows = collect_results(out_dir)?;
    let dir = out_dir.join("report");
    fs::create_dir_all(&dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;

    let mut specs: Vec<&str> = rows.iter().map(|r| r.spec.as_str()).collect();
    specs.dedup();
    let mut tables = Vec::new();
    for spec in &specs {
        let group: Vec<&ResultRow> = rows.iter().filter(|r| r.spec == *spec).collect();
        let md = dir.join(format!("table_{spec}.md"));
        fs::write(&md, format!("### {spec}\n\n{}", markdown_table(&group)))
            .map_err(|e| Error::io(format!("writing {}", md.display()), e))?;
        let csv_path = dir.join(format!("table_{spec}.csv"));
        let mut w = csv_writer(&csv_path)?;
        let mut header = vec!["model"];
        header.extend(MetricsReport::METRICS);
        w.write_record(&header)?;
        for r in &group {
            let mut rec = vec![r.model.clone()];
            rec.extend(metric_values(&r.metrics).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(format!("writing {}", csv_path.display()), e))?;
        tables.push(md);
        tables.push(csv_path);
    }

    let long_csv = dir.join("metrics_long.csv");
    let mut w = csv_writer(&long_csv)?;
    w.write_record(["model", "spec", "metric", "value"])?;
    for r in &rows {
        for (name, v) in MetricsReport::METRICS.iter().zip(metric_values(&r.metrics)) {
            w.write_record([r.model.as_str(), r.spec.as_str(), name, &v.to_string()])?;
        }
    }
    w.flush().map_err(|e| Error::io(format!("writing {}", long_csv.display()), e))?;

    let trend_csv = dir.join("trend.csv");
    let mut w = csv_writer(&trend_csv)?;
    w.write_record(["model", "baseline", "advanced", "mixed", "monotone"])?;
    let mut models: Vec<&str> = rows.iter().map(|r| r.model.as_str()).collect();
    models.sort_by_key(|m| model_rank(m));
    models.dedup();
    for model in models {
        let bal: Vec<Option<f64>> = REGIMES
            .iter()
            .map(|spec| {
                rows.iter()
                    .find(|r| r.model == model && r.spec == *spec)
                    .map(|r| r.metrics.balanced_accuracy)
            })
            .collect();
        let monotone = match (bal[0], bal[1], bal[2]) {
            (Some(b), Some(a), Some(m)) => (b <= a && a <= m).to_string(),
            _ => String::new(),
        };
        let cell = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        w.write_record([model.to_string(), cell(bal[0]), cell(bal[1]), cell(bal[2]), monotone])?;
    }
    w.flush().map_err(|e| Error::io(format!("writing {}", trend_csv.display()), e))?;

    Ok(ReportFiles { tables, long_csv, trend_csv, n_results: rows.len() })
}
