//! Multi-input runs described by a TOML manifest.
//!
//! ```toml
//! [config]          # optional TestConfig overrides
//! seed = 7
//!
//! [window]          # optional; each input is split into windows
//! window_len = 1000
//! stride = 500
//!
//! [[inputs]]
//! path = "subject1.csv"            # relative to the manifest
//!
//! [[inputs]]
//! generator = { kind = "henon" }   # or an inline reference signal
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::chaos::{run_test, TestConfig, TestResult};
use crate::error::{Error, Result};
use crate::io::{load_series, segment, SeriesFile, WindowPlan};
use crate::series::TimeSeries;
use crate::signal::GeneratorSpec;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestInput {
    pub path: Option<PathBuf>,
    pub generator: Option<GeneratorSpec>,
    /// Overrides the series label (defaults to the file stem or generator kind).
    pub label: Option<String>,
    /// Sample rate for single-column files without a rate comment.
    pub sample_rate: Option<f64>,
}

impl ManifestInput {
    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self {
            path: Some(path.into()),
            generator: None,
            label: None,
            sample_rate: None,
        }
    }

    pub fn generated(spec: GeneratorSpec) -> Self {
        Self {
            path: None,
            generator: Some(spec),
            label: None,
            sample_rate: None,
        }
    }

    /// Name shown in the summary's `file` column.
    pub fn source_name(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        match (&self.path, &self.generator) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(g)) => g.kind().to_owned(),
            (None, None) => String::new(),
        }
    }

    fn load(&self) -> Result<TimeSeries> {
        let series = match (&self.path, &self.generator) {
            (Some(path), None) => {
                let mut file = SeriesFile::detect(path)?;
                file.sample_rate = self.sample_rate;
                load_series(&file)?
            }
            (None, Some(spec)) => spec.generate()?,
            _ => {
                return Err(Error::Manifest(
                    "each input needs exactly one of `path` or `generator`".into(),
                ))
            }
        };
        Ok(match &self.label {
            Some(l) => series.with_label(l.clone()),
            None => series,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub config: TestConfig,
    pub window: Option<WindowPlan>,
    #[serde(default)]
    pub inputs: Vec<ManifestInput>,
}

impl Manifest {
    /// Parses manifest text; relative input paths are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut m: Manifest = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        for input in &mut m.inputs {
            if let Some(p) = &input.path {
                if p.is_relative() {
                    input.path = Some(base_dir.join(p));
                }
            }
        }
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Manifest("no inputs listed".into()));
        }
        for (i, input) in self.inputs.iter().enumerate() {
            if input.path.is_some() == input.generator.is_some() {
                return Err(Error::Manifest(format!(
                    "input {}: give exactly one of `path` or `generator`",
                    i + 1
                )));
            }
        }
        if let Some(plan) = self.window {
            WindowPlan::for_analysis(plan.window_len, plan.stride)?;
        }
        self.config.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    /// Input name, with `@<start>` appended for windowed rows.
    pub source: String,
    pub num_samples: Option<usize>,
    pub outcome: std::result::Result<TestResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
}

impl BatchReport {
    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_ok()).count()
    }

    pub fn all_failed(&self) -> bool {
        self.succeeded() == 0
    }

    /// `file,n,k_m,label,degenerate_count,error`, one row per input (or window).
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("file,n,k_m,label,degenerate_count,error\n");
        for row in &self.rows {
            let n = row.num_samples.map(|n| n.to_string()).unwrap_or_default();
            match &row.outcome {
                Ok(r) => writeln!(
                    out,
                    "{},{n},{:?},{},{},",
                    csv_field(&row.source),
                    r.k_m,
                    r.label,
                    r.degenerate_count()
                ),
                Err(e) => writeln!(out, "{},{n},,,,{}", csv_field(&row.source), csv_field(e)),
            }
            .unwrap();
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn run_input(input: &ManifestInput, config: &TestConfig, window: Option<WindowPlan>) -> Vec<BatchRow> {
    let source = input.source_name();
    let series = match input.load() {
        Ok(s) => s,
        Err(e) => {
            return vec![BatchRow {
                source,
                num_samples: None,
                outcome: Err(e.to_string()),
            }]
        }
    };
    let Some(plan) = window else {
        return vec![BatchRow {
            source,
            num_samples: Some(series.len()),
            outcome: run_test(&series, config).map_err(|e| e.to_string()),
        }];
    };
    match segment(&series, plan) {
        Ok(windows) => windows
            .iter()
            .enumerate()
            .map(|(i, w)| BatchRow {
                source: format!("{source}@{}", i * plan.stride + 1),
                num_samples: Some(w.len()),
                outcome: run_test(w, config).map_err(|e| e.to_string()),
            })
            .collect(),
        Err(e) => vec![BatchRow {
            source,
            num_samples: Some(series.len()),
            outcome: Err(e.to_string()),
        }],
    }
}

/// Runs every input concurrently; rows come back in manifest order.
pub fn run_batch(manifest: &Manifest) -> Result<BatchReport> {
    manifest.validate()?;
    let rows = manifest
        .inputs
        .par_iter()
        .map(|input| run_input(input, &manifest.config, manifest.window))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(BatchReport { rows })
}
