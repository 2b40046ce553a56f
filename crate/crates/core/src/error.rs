use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time series is empty")]
    EmptySeries,

    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("sample rate must be strictly positive, got {0}")]
    InvalidSampleRate(f64),

    #[error("c = {0} lies outside the open interval (0, 2π)")]
    InvalidC(f64),

    #[error("lag count n0 = {n0} out of range for a trajectory of {len} points")]
    N0OutOfRange { n0: usize, len: usize },

    #[error("MSD curve needs at least 2 lags, got {0}")]
    CurveTooShort(usize),

    #[error("series of {len} samples is too short for {n0} lags (need n0 < N)")]
    SeriesTooShort { len: usize, n0: usize },

    #[error("all {0} sampled c values produced a degenerate MSD curve")]
    AllDegenerate(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("k_m must be non-negative, got {0}")]
    NegativeKm(f64),

    #[error("frequency {f} Hz aliases at sample rate {fs} Hz (Nyquist {nyquist} Hz)", nyquist = fs / 2.0)]
    Aliasing { f: f64, fs: f64 },

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("Hénon iteration diverged at step {step} (|x| = {x})")]
    Divergence { step: usize, x: f64 },

    #[error("series has no sample rate")]
    MissingSampleRate,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("window of {window} samples is longer than the series ({len} samples)")]
    WindowTooLong { window: usize, len: usize },

    #[error("invalid window plan: {0}")]
    InvalidWindowPlan(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}:{line}: non-uniform sampling (time step differs from the first step)", path.display())]
    NonUniformSampling { path: PathBuf, line: usize },

    #[error("{}: file contains no samples", .0.display())]
    EmptyFile(PathBuf),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
