use serde::{Deserialize, Serialize};

use super::translation::TranslationTrajectory;
use crate::error::{Error, Result};

/// Which mean-squared-displacement expression feeds the growth-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MsdVariant {
    /// `M_c(n) = (1/N) Σ_{j=1}^{N-n} |z(j+n) - z(j)|²`.
    #[default]
    Standard,
    /// `M_c(n)` minus the bounded oscillatory term produced by a non-zero
    /// signal mean, `E[s]² (1 - cos nc) / (1 - cos c)` (Gottwald & Melbourne's
    /// modified MSD). Values may dip below zero.
    OscillationCorrected,
}

/// `M_c(n)` for lags `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MsdCurve {
    c: f64,
    values: Vec<f64>,
}

impl MsdCurve {
    /// Wraps externally computed values; `values[i]` is the MSD at lag `i + 1`.
    pub fn from_values(c: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::CurveTooShort(0));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(Self { c, values })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Subtracts the oscillatory mean term for a series with the given mean.
    pub fn oscillation_corrected(mut self, series_mean: f64) -> Self {
        let denom = 1.0 - self.c.cos();
        let amp = series_mean * series_mean;
        if amp > 0.0 && denom > 0.0 {
            for (i, m) in self.values.iter_mut().enumerate() {
                let n = (i + 1) as f64;
                *m -= amp * (1.0 - (n * self.c).cos()) / denom;
            }
        }
        self
    }
}

/// Mean squared displacement of a trajectory for lags `1..=n0`.
///
/// Prefactor is `1/N` and the inner sum runs over `j = 1..N-n`. Requires
/// `1 <= n0 < N`.
pub fn msd(traj: &TranslationTrajectory, n0: usize) -> Result<MsdCurve> {
    let len = traj.len();
    if n0 == 0 || n0 >= len {
        return Err(Error::N0OutOfRange { n0, len });
    }
    let (p, q) = (traj.p(), traj.q());
    let inv_n = 1.0 / len as f64;
    let values = (1..=n0)
        .map(|lag| lagged_square_sum(&p[lag..], &p[..len - lag], &q[lag..], &q[..len - lag]) * inv_n)
        .collect();
    Ok(MsdCurve { c: traj.c(), values })
}

const LANES: usize = 8;

/// `Σ (pa - pb)² + (qa - qb)²` with a fixed lane split so the loop vectorises;
/// the summation order depends only on the length, never on the platform.
fn lagged_square_sum(pa: &[f64], pb: &[f64], qa: &[f64], qb: &[f64]) -> f64 {
    let mut acc = [0.0; LANES];
    let lanes = pa
        .chunks_exact(LANES)
        .zip(pb.chunks_exact(LANES))
        .zip(qa.chunks_exact(LANES).zip(qb.chunks_exact(LANES)));
    for ((pa, pb), (qa, qb)) in lanes {
        for l in 0..LANES {
            let dp = pa[l] - pb[l];
            let dq = qa[l] - qb[l];
            acc[l] += dp * dp + dq * dq;
        }
    }
    let rem = pa.len() - pa.len() % LANES;
    let tail: f64 = (rem..pa.len())
        .map(|j| {
            let dp = pa[j] - pb[j];
            let dq = qa[j] - qb[j];
            dp * dp + dq * dq
        })
        .sum();
    acc.iter().sum::<f64>() + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(p: &[f64], q: &[f64]) -> TranslationTrajectory {
        TranslationTrajectory::from_parts(1.0, p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn zero_trajectory() {
        let m = msd(&traj(&[0.0; 3], &[0.0; 3]), 1).unwrap();
        assert_eq!(m.values(), &[0.0]);
    }

    #[test]
    fn three_point_example() {
        let t = traj(&[0.0, -2.0, -2.0], &[1.0, 1.0, -2.0]);
        let m = msd(&t, 2).unwrap();
        assert!((m.values()[0] - 13.0 / 3.0).abs() < 1e-12);
        assert!((m.values()[1] - 13.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.n_max(), 2);
    }

    #[test]
    fn n0_range() {
        let t = traj(&[0.0, 1.0, 2.0], &[0.0; 3]);
        assert!(matches!(msd(&t, 0), Err(Error::N0OutOfRange { .. })));
        assert!(matches!(msd(&t, 3), Err(Error::N0OutOfRange { n0: 3, len: 3 })));
        assert!(msd(&t, 2).is_ok());
    }

    #[test]
    fn correction_removes_pure_mean_oscillation() {
        // constant series s = m: p + iq = m Σ e^{ijc}, whose MSD is exactly the
        // oscillatory term scaled by (N - n)/N
        let c = 1.3_f64;
        let m = 0.7;
        let n = 4000;
        let s = crate::series::TimeSeries::new(vec![m; n]).unwrap();
        let t = super::super::translation_variables(&s, c).unwrap();
        let curve = msd(&t, 20).unwrap().oscillation_corrected(m);
        for (i, v) in curve.values().iter().enumerate() {
            let lag = (i + 1) as f64;
            // residual is the lost (n/N) fraction of the oscillatory term
            let osc = m * m * (1.0 - (lag * c).cos()) / (1.0 - c.cos());
            assert!((v + osc * lag / n as f64).abs() < 1e-9, "lag {lag}: {v}");
        }
    }
}
