//! One-sided periodogram normalised to a unit peak, and amplitude scaling.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const MIN_PSD_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
}

impl PsdEstimate {
    /// Bin spacing `fs / N`.
    pub fn resolution(&self) -> f64 {
        self.frequencies.get(1).copied().unwrap_or(0.0)
    }

    /// Frequency and power of the largest bin (first one on ties).
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, &p) in self.power.iter().enumerate() {
            if p > self.power[best] {
                best = i;
            }
        }
        (self.frequencies[best], self.power[best])
    }

    /// Local maxima with power strictly above `threshold`, as `(frequency, power)`.
    pub fn peaks_above(&self, threshold: f64) -> Vec<(f64, f64)> {
        let p = &self.power;
        (0..p.len())
            .filter(|&i| p[i] > threshold)
            .filter(|&i| i == 0 || p[i] >= p[i - 1])
            .filter(|&i| i + 1 == p.len() || p[i] > p[i + 1])
            .map(|i| (self.frequencies[i], p[i]))
            .collect()
    }
}

/// Rectangular-window periodogram `|X_k|²` for `k = 0..=N/2`, scaled so the
/// largest bin is exactly 1. An all-zero input yields all-zero power.
pub fn psd(series: &TimeSeries) -> Result<PsdEstimate> {
    let fs = series.sample_rate().ok_or(Error::MissingSampleRate)?;
    let n = series.len();
    if n < MIN_PSD_LEN {
        return Err(Error::TooFewSamples {
            needed: MIN_PSD_LEN,
            got: n,
        });
    }
    let mut buf: Vec<Complex<f64>> = series
        .samples()
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let bins = n / 2 + 1;
    let mut power: Vec<f64> = buf[..bins].iter().map(|z| z.norm_sqr()).collect();
    let max = power.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for p in &mut power {
            *p /= max;
        }
    }
    let frequencies = (0..bins).map(|k| k as f64 * fs / n as f64).collect();
    Ok(PsdEstimate { frequencies, power })
}

/// Affine map onto `[0, 1]`; a constant series maps to 0.5 everywhere.
pub fn normalize_amplitude(series: &TimeSeries) -> Result<TimeSeries> {
    let s = series.samples();
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let span = hi - lo;
    let out = if span > 0.0 {
        s.iter().map(|&x| ((x - lo) / span).clamp(0.0, 1.0)).collect()
    } else {
        vec![0.5; s.len()]
    };
    series.map_samples(out)
}
