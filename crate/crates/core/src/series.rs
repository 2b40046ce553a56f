use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar observable samples `s(1..=N)`, optionally tagged with a sampling rate.
///
/// Construction validates that the series is non-empty, every sample is
/// finite, and any sample rate is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    samples: Vec<f64>,
    sample_rate: Option<f64>,
    label: String,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(Self {
            samples,
            sample_rate: None,
            label: String::new(),
        })
    }

    pub fn with_sample_rate(mut self, fs: f64) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::InvalidSampleRate(fs));
        }
        self.sample_rate = Some(fs);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false for a constructed series; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Same metadata, new samples. Used by transforms that keep the timing.
    pub(crate) fn map_samples(&self, samples: Vec<f64>) -> Result<Self> {
        let mut out = TimeSeries::new(samples)?;
        out.sample_rate = self.sample_rate;
        out.label = self.label.clone();
        Ok(out)
    }

    /// Contiguous sub-series `[start, start + len)` (zero-based), keeping the
    /// sample rate and using `label` as the new label.
    pub fn slice(&self, start: usize, len: usize, label: impl Into<String>) -> Result<Self> {
        let end = start
            .checked_add(len)
            .filter(|&e| e <= self.samples.len() && len > 0)
            .ok_or(Error::WindowTooLong {
                window: len,
                len: self.samples.len().saturating_sub(start),
            })?;
        let mut out = TimeSeries::new(self.samples[start..end].to_vec())?;
        out.sample_rate = self.sample_rate;
        out.label = label.into();
        Ok(out)
    }
}
