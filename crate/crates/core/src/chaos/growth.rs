use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::msd::MsdCurve;
use crate::error::{Error, Result};

/// Growth-rate estimator applied to an MSD curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Least-squares slope of `log M(n)` against `log n`.
    Regression,
    /// Pearson correlation between `n` and `M(n)`.
    #[default]
    Correlation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Regression => "regression",
            Method::Correlation => "correlation",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regression" => Ok(Method::Regression),
            "correlation" => Ok(Method::Correlation),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

/// One `K_c` estimate. Degenerate entries carry `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate {
    pub c: f64,
    pub k: f64,
    pub method: Method,
    pub degenerate: bool,
}

impl GrowthRate {
    fn degenerate(c: f64, method: Method) -> Self {
        Self {
            c,
            k: 0.0,
            method,
            degenerate: true,
        }
    }
}

pub fn growth_rate(curve: &MsdCurve, method: Method) -> Result<GrowthRate> {
    match method {
        Method::Regression => growth_rate_regression(curve),
        Method::Correlation => growth_rate_correlation(curve),
    }
}

/// Slope of `log M(n)` vs `log n` over the lags with `M(n) > 0`.
///
/// The slope is returned unclamped. Fewer than two usable lags, or a flat
/// curve, gives a degenerate entry.
pub fn growth_rate_regression(curve: &MsdCurve) -> Result<GrowthRate> {
    check_len(curve)?;
    let method = Method::Regression;
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(i, &m)| (((i + 1) as f64).ln(), m.ln()))
        .unzip();
    if xs.len() < 2 || is_flat(curve.values()) {
        return Ok(GrowthRate::degenerate(curve.c(), method));
    }
    let moments = Moments::of(&xs, &ys);
    Ok(GrowthRate {
        c: curve.c(),
        k: moments.sxy / moments.sxx,
        method,
        degenerate: false,
    })
}

/// Pearson correlation of `(1, 2, …, n_max)` with `(M(1), …, M(n_max))`.
pub fn growth_rate_correlation(curve: &MsdCurve) -> Result<GrowthRate> {
    check_len(curve)?;
    let method = Method::Correlation;
    let ys = curve.values();
    if is_flat(ys) {
        return Ok(GrowthRate::degenerate(curve.c(), method));
    }
    let xs: Vec<f64> = (1..=ys.len()).map(|n| n as f64).collect();
    let m = Moments::of(&xs, ys);
    let k = (m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0);
    Ok(GrowthRate {
        c: curve.c(),
        k,
        method,
        degenerate: false,
    })
}

fn check_len(curve: &MsdCurve) -> Result<()> {
    if curve.n_max() < 2 {
        return Err(Error::CurveTooShort(curve.n_max()));
    }
    Ok(())
}

/// Zero variance up to rounding in the mean, relative to the curve's scale.
fn is_flat(ys: &[f64]) -> bool {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let scale = ys.iter().fold(0.0_f64, |a, y| a.max(y.abs()));
    if scale == 0.0 {
        return true;
    }
    let tol = 8.0 * f64::EPSILON * scale;
    ys.iter().all(|y| (y - mean).abs() <= tol)
}

struct Moments {
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl Moments {
    fn of(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut m = Moments {
            sxx: 0.0,
            syy: 0.0,
            sxy: 0.0,
        };
        for (x, y) in xs.iter().zip(ys) {
            let (dx, dy) = (x - mx, y - my);
            m.sxx += dx * dx;
            m.syy += dy * dy;
            m.sxy += dx * dy;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: impl Fn(f64) -> f64, n: usize) -> MsdCurve {
        MsdCurve::from_values(1.0, (1..=n).map(|i| f(i as f64)).collect()).unwrap()
    }

    #[test]
    fn regression_power_laws() {
        let g = growth_rate_regression(&curve(|n| n, 100)).unwrap();
        assert!((g.k - 1.0).abs() < 1e-12 && !g.degenerate);
        let g = growth_rate_regression(&curve(|n| n * n, 100)).unwrap();
        assert!((g.k - 2.0).abs() < 1e-12, "{}", g.k);
    }

    #[test]
    fn regression_constant_is_flat() {
        let g = growth_rate_regression(&curve(|_| 7.0, 100)).unwrap();
        assert_eq!(g.k, 0.0);
        assert!(g.degenerate);
    }

    #[test]
    fn regression_skips_zeros() {
        // M = n on odd lags, 0 on even lags: the fit sees only the odd lags
        let g = growth_rate_regression(&curve(|n| if (n as u64).is_multiple_of(2) { 0.0 } else { n }, 50))
            .unwrap();
        assert!((g.k - 1.0).abs() < 1e-12);
        let g = growth_rate_regression(&curve(|n| if n == 3.0 { 5.0 } else { 0.0 }, 10)).unwrap();
        assert!(g.degenerate);
        assert_eq!(g.k, 0.0);
    }

    #[test]
    fn correlation_examples() {
        let g = growth_rate_correlation(&curve(|n| 2.0 * n, 100)).unwrap();
        assert!((g.k - 1.0).abs() < 1e-12);
        let g = growth_rate_correlation(&curve(|_| 3.25, 100)).unwrap();
        assert_eq!((g.k, g.degenerate), (0.0, true));
        let g = growth_rate_correlation(&curve(|n| -3.0 * n + 500.0, 100)).unwrap();
        assert!((g.k + 1.0).abs() < 1e-12);
        assert!((g.k.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_zero_curve_is_degenerate_for_both() {
        let c = curve(|_| 0.0, 10);
        for m in [Method::Regression, Method::Correlation] {
            let g = growth_rate(&c, m).unwrap();
            assert!(g.degenerate && g.k == 0.0 && g.method == m);
        }
    }

    #[test]
    fn single_lag_rejected() {
        let c = curve(|n| n, 1);
        assert!(matches!(growth_rate_correlation(&c), Err(Error::CurveTooShort(1))));
        assert!(matches!(growth_rate_regression(&c), Err(Error::CurveTooShort(1))));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("regression".parse::<Method>().unwrap(), Method::Regression);
        assert_eq!(Method::Correlation.to_string(), "correlation");
        assert!("slope".parse::<Method>().is_err());
    }
}
