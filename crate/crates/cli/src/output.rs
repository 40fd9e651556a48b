//! CSV and JSON serialization of sweep series.
//!
//! CSV columns are `t_prime,concurrence,bsm_success_prob,defined`, floats in
//! scientific notation with 12 significant digits; an undefined concurrence
//! is written as `NaN` with `defined = 0`.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fluxswap::{Scenario, SweepPoint, SweepSeries};
use serde::Serialize;

use crate::config::OutputFormat;

pub const CSV_HEADER: [&str; 4] = ["t_prime", "concurrence", "bsm_success_prob", "defined"];

/// 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn to_csv(series: &SweepSeries) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for p in &series.points {
        let (c, defined) = match p.concurrence {
            Some(c) => (format_float(c), "1"),
            None => ("NaN".to_string(), "0"),
        };
        w.write_record([
            format_float(p.t_prime).as_str(),
            c.as_str(),
            format_float(p.success_prob).as_str(),
            defined,
        ])?;
    }
    Ok(w.into_inner()?)
}

#[derive(Serialize)]
struct JsonPoint {
    t_prime: f64,
    concurrence: Option<f64>,
    bsm_success_prob: f64,
    defined: bool,
}

#[derive(Serialize)]
struct JsonSeries<'a> {
    scenario: &'a Scenario,
    points: Vec<JsonPoint>,
}

pub fn to_json(series: &SweepSeries) -> Result<Vec<u8>> {
    let doc = JsonSeries {
        scenario: &series.scenario,
        points: series
            .points
            .iter()
            .map(|p| JsonPoint {
                t_prime: p.t_prime,
                concurrence: p.concurrence,
                bsm_success_prob: p.success_prob,
                defined: p.concurrence.is_some(),
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn encode(series: &SweepSeries, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => to_csv(series),
        OutputFormat::Json => to_json(series),
    }
}

/// Writes `bytes` through a temporary file in the target directory, so a
/// failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Parses a CSV file written by [`to_csv`].
pub fn read_csv(bytes: &[u8]) -> Result<Vec<SweepPoint>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .context("short CSV row")?
                .parse::<f64>()
                .with_context(|| format!("bad number in column {}", CSV_HEADER[i]))
        };
        let defined = match rec.get(3) {
            Some("1") => true,
            Some("0") => false,
            other => bail!("bad `defined` value {other:?}"),
        };
        points.push(SweepPoint {
            t_prime: field(0)?,
            concurrence: if defined { Some(field(1)?) } else { None },
            success_prob: field(2)?,
        });
    }
    Ok(points)
}
