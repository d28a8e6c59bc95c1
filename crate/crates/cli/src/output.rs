//! CSV and JSON emission with stable schemas and byte-reproducible
//! formatting.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use fraclms::{CurveLabel, LearningCurve, SteadyState, SteadyStateReport};
use serde::Serialize;

/// Render a float the way the file schemas expect: shortest round-trip
/// representation, with IEEE specials serialized as `inf`/`-inf`/`nan`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

/// Fractional orders always carry a decimal point, matching the curve
/// labels (`1.0`, not `1`).
fn format_nu(nu: f64) -> String {
    if nu.fract() == 0.0 {
        format!("{nu:.1}")
    } else {
        format!("{nu}")
    }
}

/// Write the mean learning curves as `iteration,<label>,...` rows, labels in
/// deterministic (algorithm, ν-ascending) order.
pub fn write_curves_csv(
    path: &Path,
    curves: &BTreeMap<CurveLabel, LearningCurve>,
) -> anyhow::Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let labels: Vec<String> = curves.keys().map(|label| label.to_string()).collect();
    writeln!(file, "iteration,{}", labels.join(","))?;
    let samples = curves
        .values()
        .next()
        .map(|curve| curve.values.len())
        .unwrap_or(0);
    let mut row = String::new();
    for k in 0..samples {
        row.clear();
        row.push_str(&k.to_string());
        for curve in curves.values() {
            row.push(',');
            row.push_str(&format_value(curve.values[k]));
        }
        writeln!(file, "{row}")?;
    }
    Ok(())
}

/// Write the steady-state report in table layout: one row per algorithm, one
/// column per fractional order, empty cells where a pair was not run.
pub fn write_table_csv(path: &Path, report: &SteadyStateReport) -> anyhow::Result<()> {
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut orders: Vec<f64> = Vec::new();
    let mut algorithms: Vec<String> = Vec::new();
    for label in report.entries.keys() {
        if !orders.iter().any(|&v| v == label.nu.value()) {
            orders.push(label.nu.value());
        }
        let name = label.algorithm.to_string();
        if !algorithms.contains(&name) {
            algorithms.push(name);
        }
    }
    orders.sort_by(|a, b| a.total_cmp(b));

    let header: Vec<String> = orders.iter().map(|&nu| format!("nu={}", format_nu(nu))).collect();
    writeln!(file, "algorithm,{}", header.join(","))?;
    for algorithm in &algorithms {
        let mut row = algorithm.clone();
        for &nu in &orders {
            row.push(',');
            let cell = report
                .entries
                .iter()
                .find(|(label, _)| label.algorithm.to_string() == *algorithm && label.nu.value() == nu)
                .map(|(_, state)| match state {
                    SteadyState::Db(db) => format_value(*db),
                    SteadyState::Diverged => "diverged".to_string(),
                });
            if let Some(cell) = cell {
                row.push_str(&cell);
            }
        }
        writeln!(file, "{row}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TableEntry {
    algorithm: String,
    nu: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    db: Option<f64>,
}

#[derive(Serialize)]
struct TableDocument<'a> {
    scenario: &'a str,
    runs: usize,
    samples: usize,
    seed: u64,
    entries: Vec<TableEntry>,
}

/// JSON mirror of the steady-state table.
pub fn write_table_json(
    path: &Path,
    scenario: &str,
    runs: usize,
    samples: usize,
    seed: u64,
    report: &SteadyStateReport,
) -> anyhow::Result<()> {
    let entries = report
        .entries
        .iter()
        .map(|(label, state)| TableEntry {
            algorithm: label.algorithm.to_string(),
            nu: label.nu.value(),
            status: match state {
                SteadyState::Db(_) => "ok",
                SteadyState::Diverged => "diverged",
            },
            db: state.db(),
        })
        .collect();
    let document = TableDocument {
        scenario,
        runs,
        samples,
        seed,
        entries,
    };
    let mut file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    serde_json::to_writer_pretty(&mut file, &document)?;
    writeln!(file)?;
    Ok(())
}
