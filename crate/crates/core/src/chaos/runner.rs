use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{Regularity, Thresholds};
use super::growth::{growth_rate, GrowthRate, Method};
use super::msd::{msd, MsdVariant};
use super::translation::translation_variables;
use crate::error::{Error, Result};
use crate::rng::draw_c_values;
use crate::series::TimeSeries;

/// Series shorter than this get the `short_series` advisory: `K_m` then shows
/// a tendency toward 0 or 1 rather than a converged value.
pub const SHORT_SERIES_LEN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    Mean,
    Median,
    /// Mean of the central values after dropping `floor(trim * m)` from each end.
    #[default]
    TrimmedMean,
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Mean => "mean",
            Aggregator::Median => "median",
            Aggregator::TrimmedMean => "trimmed_mean",
        })
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Aggregator::Mean),
            "median" => Ok(Aggregator::Median),
            "trimmed" | "trimmed_mean" => Ok(Aggregator::TrimmedMean),
            other => Err(Error::InvalidConfig(format!("unknown aggregator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TestConfig {
    pub num_c: usize,
    pub c_low: f64,
    pub c_high: f64,
    pub method: Method,
    pub aggregator: Aggregator,
    pub trim_fraction: f64,
    /// `N0 = max(2, floor(n0_fraction * N))`.
    pub n0_fraction: f64,
    pub msd_variant: MsdVariant,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            num_c: 100,
            c_low: 0.0,
            c_high: TAU,
            method: Method::Correlation,
            aggregator: Aggregator::TrimmedMean,
            trim_fraction: 0.25,
            n0_fraction: 0.2,
            msd_variant: MsdVariant::Standard,
            seed: 0,
            thresholds: Thresholds::default(),
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_c == 0 {
            return bad("num_c must be at least 1".into());
        }
        let range_ok = self.c_low.is_finite()
            && self.c_high.is_finite()
            && self.c_low >= 0.0
            && self.c_low < self.c_high
            && self.c_high <= TAU;
        if !range_ok {
            return bad(format!(
                "c range ({}, {}) must satisfy 0 <= c_low < c_high <= 2π",
                self.c_low, self.c_high
            ));
        }
        if !(0.0..0.5).contains(&self.trim_fraction) {
            return bad(format!("trim_fraction {} not in [0, 0.5)", self.trim_fraction));
        }
        if !(self.n0_fraction > 0.0 && self.n0_fraction <= 0.5) {
            return bad(format!("n0_fraction {} not in (0, 0.5]", self.n0_fraction));
        }
        self.thresholds.validate()
    }

    /// Number of MSD lags used for a series of `len` samples.
    pub fn n0_for(&self, len: usize) -> usize {
        ((self.n0_fraction * len as f64).floor() as usize).max(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub series_label: String,
    pub num_samples: usize,
    pub n0: usize,
    /// Signed estimates in the order the `c` values were drawn.
    pub per_c: Vec<GrowthRate>,
    /// Aggregate of `|k|` over the non-degenerate entries.
    pub k_m: f64,
    pub label: Regularity,
    pub short_series: bool,
    pub config: TestConfig,
}

impl TestResult {
    pub fn degenerate_count(&self) -> usize {
        self.per_c.iter().filter(|g| g.degenerate).count()
    }

    /// `|k|` of every non-degenerate entry, in draw order.
    pub fn abs_k(&self) -> Vec<f64> {
        self.per_c
            .iter()
            .filter(|g| !g.degenerate)
            .map(|g| g.k.abs())
            .collect()
    }
}

/// Applies `aggregator` to `values`. `values` must be non-empty.
pub fn aggregate(values: &[f64], aggregator: Aggregator, trim_fraction: f64) -> f64 {
    assert!(!values.is_empty(), "aggregate of an empty set");
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    match aggregator {
        Aggregator::Mean => mean(values),
        Aggregator::Median | Aggregator::TrimmedMean => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let m = sorted.len();
            if aggregator == Aggregator::Median {
                if m % 2 == 1 {
                    sorted[m / 2]
                } else {
                    0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
                }
            } else {
                let cut = (trim_fraction * m as f64).floor() as usize;
                mean(&sorted[cut..m - cut])
            }
        }
    }
}

/// One `K_c` estimate for a fixed `c`.
pub fn growth_rate_at(
    series: &TimeSeries,
    c: f64,
    n0: usize,
    method: Method,
    variant: MsdVariant,
) -> Result<GrowthRate> {
    let traj = translation_variables(series, c)?;
    let mut curve = msd(&traj, n0)?;
    if variant == MsdVariant::OscillationCorrected {
        curve = curve.oscillation_corrected(series.mean());
    }
    growth_rate(&curve, method)
}

/// Full multi-`c` test.
///
/// All `c` values are drawn up front from the seeded source; the branches are
/// then evaluated in parallel and collected back in draw order.
pub fn run_test(series: &TimeSeries, config: &TestConfig) -> Result<TestResult> {
    config.validate()?;
    let len = series.len();
    let n0 = config.n0_for(len);
    if n0 >= len {
        return Err(Error::SeriesTooShort { len, n0 });
    }
    let cs = draw_c_values(config.seed, config.num_c, config.c_low, config.c_high);
    let per_c = cs
        .par_iter()
        .map(|&c| growth_rate_at(series, c, n0, config.method, config.msd_variant))
        .collect::<Result<Vec<_>>>()?;

    let abs_k: Vec<f64> = per_c
        .iter()
        .filter(|g| !g.degenerate)
        .map(|g| g.k.abs())
        .collect();
    if abs_k.is_empty() {
        return Err(Error::AllDegenerate(per_c.len()));
    }
    let k_m = aggregate(&abs_k, config.aggregator, config.trim_fraction);
    let label = config.thresholds.classify(k_m)?;
    Ok(TestResult {
        series_label: series.label().to_owned(),
        num_samples: len,
        n0,
        per_c,
        k_m,
        label,
        short_series: len < SHORT_SERIES_LEN,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: Vec<f64>) -> TimeSeries {
        TimeSeries::new(v).unwrap()
    }

    #[test]
    fn aggregators() {
        let v = [0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.4, 0.8];
        assert!((aggregate(&v, Aggregator::Mean, 0.25) - 0.4875).abs() < 1e-15);
        assert!((aggregate(&v, Aggregator::Median, 0.25) - 0.45).abs() < 1e-15);
        // drop two from each end: 0.3 0.4 0.5 0.7
        assert!((aggregate(&v, Aggregator::TrimmedMean, 0.25) - 0.475).abs() < 1e-15);
        assert_eq!(aggregate(&[0.3, 0.1, 0.2], Aggregator::Median, 0.0), 0.2);
        assert_eq!(aggregate(&[0.6], Aggregator::TrimmedMean, 0.49), 0.6);
    }

    #[test]
    fn aggregator_names() {
        assert_eq!("trimmed".parse::<Aggregator>().unwrap(), Aggregator::TrimmedMean);
        assert_eq!("median".parse::<Aggregator>().unwrap(), Aggregator::Median);
        assert!("mode".parse::<Aggregator>().is_err());
    }

    #[test]
    fn n0_rule() {
        let cfg = TestConfig::default();
        assert_eq!(cfg.n0_for(5000), 1000);
        assert_eq!(cfg.n0_for(3), 2);
        let cfg = TestConfig {
            n0_fraction: 0.1,
            ..cfg
        };
        assert_eq!(cfg.n0_for(5000), 500);
        assert_eq!(cfg.n0_for(19), 2);
    }

    #[test]
    fn config_validation() {
        assert!(TestConfig::default().validate().is_ok());
        let bad = [
            TestConfig { num_c: 0, ..Default::default() },
            TestConfig { c_low: 2.0, c_high: 1.0, ..Default::default() },
            TestConfig { c_high: 7.0, ..Default::default() },
            TestConfig { trim_fraction: 0.5, ..Default::default() },
            TestConfig { n0_fraction: 0.0, ..Default::default() },
            TestConfig { n0_fraction: 0.6, ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))), "{cfg:?}");
        }
    }

    #[test]
    fn zero_signal_is_all_degenerate() {
        for method in [Method::Correlation, Method::Regression] {
            let cfg = TestConfig { method, num_c: 10, ..Default::default() };
            let err = run_test(&series(vec![0.0; 200]), &cfg).unwrap_err();
            assert!(matches!(err, Error::AllDegenerate(10)), "{err}");
        }
    }

    #[test]
    fn too_short_series() {
        let cfg = TestConfig::default();
        assert!(matches!(
            run_test(&series(vec![1.0]), &cfg),
            Err(Error::SeriesTooShort { len: 1, n0: 2 })
        ));
        assert!(matches!(
            run_test(&series(vec![1.0, 2.0]), &cfg),
            Err(Error::SeriesTooShort { len: 2, .. })
        ));
        assert!(run_test(&series(vec![1.0, -2.0, 0.5]), &cfg).is_ok());
    }

    #[test]
    fn result_shape() {
        let s: Vec<f64> = (0..600).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        let cfg = TestConfig { num_c: 17, seed: 3, ..Default::default() };
        let r = run_test(&series(s).with_label("x"), &cfg).unwrap();
        assert_eq!(r.per_c.len(), 17);
        assert_eq!(r.n0, 120);
        assert!(r.short_series);
        assert_eq!(r.series_label, "x");
        let cs = draw_c_values(3, 17, 0.0, TAU);
        for (g, c) in r.per_c.iter().zip(cs) {
            assert_eq!(g.c, c);
        }
        let recomputed = aggregate(&r.abs_k(), cfg.aggregator, cfg.trim_fraction);
        assert_eq!(recomputed, r.k_m);
        assert_eq!(r.label, cfg.thresholds.classify(r.k_m).unwrap());
    }
}
