//! File formats: series input/output, result JSON, and plot-data CSVs.
//!
//! Reals are written with Rust's shortest round-trip formatting, so every value
//! reloads bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chaos::{GrowthRate, Method, Regularity, TestConfig, TestResult, TranslationTrajectory};
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spectral::PsdEstimate;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

const RATE_PREFIX: &str = "# sample_rate=";
const TIME_VALUE_HEADER: &str = "time,value";

/// Relative tolerance on time-step uniformity in `time,value` files.
const SPACING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFormat {
    /// One decimal per line, optionally preceded by `# sample_rate=<Hz>`.
    SingleColumn,
    /// Header `time,value`, then `seconds,value` rows on a uniform grid.
    TimeValueCsv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFile {
    pub path: PathBuf,
    pub format: SeriesFormat,
    /// Overrides any rate found in (or derived from) the file.
    pub sample_rate: Option<f64>,
}

impl SeriesFile {
    pub fn new(path: impl Into<PathBuf>, format: SeriesFormat) -> Self {
        Self {
            path: path.into(),
            format,
            sample_rate: None,
        }
    }

    /// Picks the format from the first non-blank line: a `time,value` header
    /// means [`SeriesFormat::TimeValueCsv`], anything else single-column.
    pub fn detect(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let text = fs::read_to_string(&path)?;
        let first = text.lines().map(str::trim).find(|l| !l.is_empty());
        let format = match first {
            Some(l) if l.eq_ignore_ascii_case(TIME_VALUE_HEADER) => SeriesFormat::TimeValueCsv,
            _ => SeriesFormat::SingleColumn,
        };
        Ok(Self::new(path, format))
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_owned(),
        line,
        msg: msg.into(),
    }
}

fn parse_real(path: &Path, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("not a number: {:?}", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value {v}")));
    }
    Ok(v)
}

pub fn load_series(file: &SeriesFile) -> Result<TimeSeries> {
    let text = fs::read_to_string(&file.path)?;
    let (samples, rate) = match file.format {
        SeriesFormat::SingleColumn => parse_single_column(&file.path, &text)?,
        SeriesFormat::TimeValueCsv => parse_time_value(&file.path, &text)?,
    };
    if samples.is_empty() {
        return Err(Error::EmptyFile(file.path.clone()));
    }
    let label = file
        .path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut series = TimeSeries::new(samples)?.with_label(label);
    if let Some(fs) = file.sample_rate.or(rate) {
        series = series.with_sample_rate(fs)?;
    }
    Ok(series)
}

fn parse_single_column(path: &Path, text: &str) -> Result<(Vec<f64>, Option<f64>)> {
    let mut rate = None;
    let mut samples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if !samples.is_empty() {
                return Err(parse_err(path, lineno, "comment after data"));
            }
            if let Some(v) = line.strip_prefix(RATE_PREFIX) {
                rate = Some(parse_real(path, lineno, v)?);
            } else if !rest.trim().is_empty() && rest.trim().starts_with("sample_rate") {
                return Err(parse_err(path, lineno, "malformed sample_rate comment"));
            }
            continue;
        }
        samples.push(parse_real(path, lineno, line)?);
    }
    Ok((samples, rate))
}

fn parse_time_value(path: &Path, text: &str) -> Result<(Vec<f64>, Option<f64>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h.eq_ignore_ascii_case(TIME_VALUE_HEADER) => {}
        Some((n, h)) => return Err(parse_err(path, n, format!("expected header \"time,value\", got {h:?}"))),
        None => return Err(Error::EmptyFile(path.to_owned())),
    }
    let mut times = Vec::new();
    let mut samples = Vec::new();
    let mut step = None;
    for (lineno, line) in lines {
        let mut fields = line.split(',');
        let (Some(t), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(path, lineno, "expected two comma-separated fields"));
        };
        let t = parse_real(path, lineno, t)?;
        let v = parse_real(path, lineno, v)?;
        if let Some(&prev) = times.last() {
            let dt: f64 = t - prev;
            if dt <= 0.0 {
                return Err(parse_err(path, lineno, "time stamps must be strictly increasing"));
            }
            match step {
                None => step = Some(dt),
                Some(first) => {
                    if (dt - first).abs() > SPACING_TOL * first {
                        return Err(Error::NonUniformSampling {
                            path: path.to_owned(),
                            line: lineno,
                        });
                    }
                }
            }
        }
        times.push(t);
        samples.push(v);
    }
    let rate = match (times.first(), times.last()) {
        (Some(&t0), Some(&t1)) if times.len() > 1 => {
            Some(snap_rate((times.len() - 1) as f64 / (t1 - t0)))
        }
        _ => None,
    };
    Ok((samples, rate))
}

/// Decimal time stamps rarely invert to an exact rate; snap to the nearest
/// integer Hz when within 1e-9 relative.
fn snap_rate(rate: f64) -> f64 {
    let r = rate.round();
    if r > 0.0 && (rate - r).abs() <= 1e-9 * rate {
        r
    } else {
        rate
    }
}

pub fn write_series(series: &TimeSeries, path: impl AsRef<Path>, format: SeriesFormat) -> Result<()> {
    let mut out = String::with_capacity(series.len() * 24);
    match format {
        SeriesFormat::SingleColumn => {
            if let Some(fs) = series.sample_rate() {
                writeln!(out, "{RATE_PREFIX}{fs:?}").unwrap();
            }
            for x in series.samples() {
                writeln!(out, "{x:?}").unwrap();
            }
        }
        SeriesFormat::TimeValueCsv => {
            let fs = series.sample_rate().ok_or(Error::MissingSampleRate)?;
            writeln!(out, "{TIME_VALUE_HEADER}").unwrap();
            for (j, x) in series.samples().iter().enumerate() {
                writeln!(out, "{:?},{x:?}", j as f64 / fs).unwrap();
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Fixed-length windows over a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPlan {
    pub window_len: usize,
    pub stride: usize,
}

impl WindowPlan {
    /// Shortest window accepted for running the test on each segment.
    pub const MIN_ANALYSIS_LEN: usize = 100;

    pub fn new(window_len: usize, stride: usize) -> Result<Self> {
        if window_len == 0 || stride == 0 {
            return Err(Error::InvalidWindowPlan(format!(
                "window length and stride must be positive (got {window_len}, {stride})"
            )));
        }
        Ok(Self { window_len, stride })
    }

    /// Like [`WindowPlan::new`] but also enforces [`Self::MIN_ANALYSIS_LEN`].
    pub fn for_analysis(window_len: usize, stride: usize) -> Result<Self> {
        if window_len < Self::MIN_ANALYSIS_LEN {
            return Err(Error::InvalidWindowPlan(format!(
                "window length {window_len} is below the minimum of {}",
                Self::MIN_ANALYSIS_LEN
            )));
        }
        Self::new(window_len, stride)
    }

    pub fn count(&self, len: usize) -> usize {
        if self.window_len > len {
            0
        } else {
            (len - self.window_len) / self.stride + 1
        }
    }
}

/// Windows start at samples 1, 1 + stride, … (1-based). Each window's label
/// is the parent label followed by `@<start>`.
pub fn segment(series: &TimeSeries, plan: WindowPlan) -> Result<Vec<TimeSeries>> {
    let len = series.len();
    if plan.window_len > len {
        return Err(Error::WindowTooLong {
            window: plan.window_len,
            len,
        });
    }
    (0..plan.count(len))
        .map(|i| {
            let start = i * plan.stride;
            series.slice(start, plan.window_len, format!("{}@{}", series.label(), start + 1))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerCEntry {
    pub c: f64,
    pub k: f64,
    pub degenerate: bool,
}

/// On-disk form of a [`TestResult`]; field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub series_label: String,
    pub num_samples: usize,
    pub n0: usize,
    pub method: Method,
    pub seed: u64,
    pub num_c: usize,
    pub k_m: f64,
    pub label: Regularity,
    pub short_series: bool,
    pub degenerate_count: usize,
    pub per_c: Vec<PerCEntry>,
    pub config: TestConfig,
    pub tool_version: String,
}

impl From<&TestResult> for ResultDocument {
    fn from(r: &TestResult) -> Self {
        Self {
            series_label: r.series_label.clone(),
            num_samples: r.num_samples,
            n0: r.n0,
            method: r.config.method,
            seed: r.config.seed,
            num_c: r.config.num_c,
            k_m: r.k_m,
            label: r.label,
            short_series: r.short_series,
            degenerate_count: r.degenerate_count(),
            per_c: r
                .per_c
                .iter()
                .map(|g| PerCEntry {
                    c: g.c,
                    k: g.k,
                    degenerate: g.degenerate,
                })
                .collect(),
            config: r.config.clone(),
            tool_version: TOOL_VERSION.to_owned(),
        }
    }
}

impl ResultDocument {
    /// Rebuilds the in-memory result.
    pub fn into_result(self) -> TestResult {
        let method = self.method;
        TestResult {
            series_label: self.series_label,
            num_samples: self.num_samples,
            n0: self.n0,
            per_c: self
                .per_c
                .into_iter()
                .map(|e| GrowthRate {
                    c: e.c,
                    k: e.k,
                    method,
                    degenerate: e.degenerate,
                })
                .collect(),
            k_m: self.k_m,
            label: self.label,
            short_series: self.short_series,
            config: self.config,
        }
    }
}

pub fn result_to_json(result: &TestResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&ResultDocument::from(result))?;
    s.push('\n');
    Ok(s)
}

pub fn export_result(result: &TestResult, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, result_to_json(result)?)?;
    Ok(())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<ResultDocument> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn trajectory_csv(traj: &TranslationTrajectory) -> String {
    let mut out = String::from("p,q\n");
    for (p, q) in traj.p().iter().zip(traj.q()) {
        writeln!(out, "{p:?},{q:?}").unwrap();
    }
    out
}

/// Two-column `p,q` CSV of the translation-variable path.
pub fn export_trajectory(traj: &TranslationTrajectory, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, trajectory_csv(traj))?;
    Ok(())
}

/// `index,c,abs_k,degenerate` per drawn `c`, in draw order (1-based index).
pub fn kc_scatter_csv(result: &TestResult) -> String {
    let mut out = String::from("index,c,abs_k,degenerate\n");
    for (i, g) in result.per_c.iter().enumerate() {
        writeln!(out, "{},{:?},{:?},{}", i + 1, g.c, g.k.abs(), g.degenerate).unwrap();
    }
    out
}

pub fn export_kc_scatter(result: &TestResult, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, kc_scatter_csv(result))?;
    Ok(())
}

pub fn psd_csv(psd: &PsdEstimate) -> String {
    let mut out = String::from("frequency,power\n");
    for (f, p) in psd.frequencies.iter().zip(&psd.power) {
        writeln!(out, "{f:?},{p:?}").unwrap();
    }
    out
}

pub fn export_psd(psd: &PsdEstimate, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, psd_csv(psd))?;
    Ok(())
}
