//! Run reports and their serialization (JSON report, CSV sample matrix).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::BodyDescriptor;
use crate::precondition::DikinSummary;
use crate::samplers::{Budget, Sampler};

/// Fully resolved configuration echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub sampler: Option<Sampler>,
    pub tau: Option<f64>,
    pub max_reflections: Option<u32>,
    pub seed: u64,
    pub rng: String,
    pub budget: Option<Budget>,
    pub start: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition: Option<DikinSummary>,
}

impl ConfigEcho {
    pub fn bare(seed: u64) -> Self {
        Self {
            sampler: None,
            tau: None,
            max_reflections: None,
            seed,
            rng: crate::rng::GENERATOR_ID.to_string(),
            budget: None,
            start: None,
            precondition: None,
        }
    }
}

/// One expected-value comparison; scenario exit status reflects these.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub op: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn within(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            op: "within".into(),
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            op: "<=".into(),
            value,
            expected: bound,
            tolerance: 0.0,
            pass: value <= bound,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            op: ">=".into(),
            value,
            expected: bound,
            tolerance: 0.0,
            pass: value >= bound,
        }
    }
}

/// Report of one scenario or sampling run. Every statistic is recomputable
/// from the stored samples when they are retained.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<serde_json::Value>,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyDescriptor>,
    pub bo_calls: u64,
    pub samples_emitted: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflections_per_sample: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts_per_sample: Option<Vec<u32>>,
    pub diagnostics: serde_json::Value,
    pub checks: Vec<CheckResult>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Writes the report: JSON carries the full diagnostics, CSV the sample
/// matrix (one row per sample, `index` column then coordinates, shortest
/// round-trip float formatting).
pub fn emit_report(report: &RunReport, format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            w.write_all(b"\n")?;
        }
        OutputFormat::Csv => {
            let samples = report.samples.as_deref().unwrap_or(&[]);
            write_samples_csv(samples, &mut w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples_csv(samples: &[Vec<f64>], w: &mut impl Write) -> Result<()> {
    let dim = samples.first().map_or(0, |p| p.len());
    let mut header = String::from("index");
    for j in 0..dim {
        header.push_str(&format!(",x{j}"));
    }
    writeln!(w, "{header}")?;
    for (i, p) in samples.iter().enumerate() {
        let mut line = i.to_string();
        for v in p {
            line.push(',');
            line.push_str(&format!("{v}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_samples_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path)?;
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if lineno == 0 || line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let _index = fields.next();
        let row: std::result::Result<Vec<f64>, _> = fields.map(str::parse::<f64>).collect();
        out.push(row.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?);
    }
    Ok(out)
}
