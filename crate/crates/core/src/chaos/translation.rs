use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// The planar path `(p_c(n), q_c(n))` traced by the cumulative trigonometric
/// sums of a series for one angle `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationTrajectory {
    c: f64,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl TranslationTrajectory {
    /// Builds a trajectory from precomputed coordinates.
    pub fn from_parts(c: f64, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        check_c(c)?;
        if p.is_empty() {
            return Err(Error::EmptySeries);
        }
        if p.len() != q.len() {
            return Err(Error::InvalidConfig(format!(
                "p has {} points but q has {}",
                p.len(),
                q.len()
            )));
        }
        Ok(Self { c, p, q })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Largest distance from the origin over the whole path.
    pub fn max_radius(&self) -> f64 {
        self.p
            .iter()
            .zip(&self.q)
            .map(|(p, q)| p.hypot(*q))
            .fold(0.0, f64::max)
    }
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 && c < TAU {
        Ok(())
    } else {
        Err(Error::InvalidC(c))
    }
}

/// `p(n) = Σ_{j≤n} s(j) cos(jc)`, `q(n) = Σ_{j≤n} s(j) sin(jc)`, one pass.
///
/// The phase `jc` is evaluated directly for every `j` rather than by rotating
/// the previous phasor, so rounding does not accumulate along the series.
pub fn translation_variables(series: &TimeSeries, c: f64) -> Result<TranslationTrajectory> {
    check_c(c)?;
    let s = series.samples();
    let mut p = Vec::with_capacity(s.len());
    let mut q = Vec::with_capacity(s.len());
    let (mut pa, mut qa) = (0.0, 0.0);
    for (i, &x) in s.iter().enumerate() {
        let (sin, cos) = ((i + 1) as f64 * c).sin_cos();
        pa += x * cos;
        qa += x * sin;
        p.push(pa);
        q.push(qa);
    }
    Ok(TranslationTrajectory { c, p, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_signal_stays_at_origin() {
        let t = translation_variables(&series(&[0.0, 0.0, 0.0]), 2.5).unwrap();
        assert_eq!(t.p(), &[0.0, 0.0, 0.0]);
        assert_eq!(t.q(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn quarter_turn_example() {
        let t = translation_variables(&series(&[1.0, 2.0, 3.0]), FRAC_PI_2).unwrap();
        let (p_want, q_want) = ([0.0, -2.0, -2.0], [1.0, 1.0, -2.0]);
        for i in 0..3 {
            assert!((t.p()[i] - p_want[i]).abs() < 1e-12, "p[{i}] = {}", t.p()[i]);
            assert!((t.q()[i] - q_want[i]).abs() < 1e-12, "q[{i}] = {}", t.q()[i]);
        }
    }

    #[test]
    fn c_must_be_strictly_inside() {
        let s = series(&[1.0]);
        for c in [0.0, -1.0, TAU, 7.0, f64::NAN] {
            assert!(matches!(translation_variables(&s, c), Err(Error::InvalidC(_))));
        }
        assert!(translation_variables(&s, 1e-9).is_ok());
    }

    #[test]
    fn from_parts_validates() {
        assert!(TranslationTrajectory::from_parts(1.0, vec![0.0], vec![0.0, 1.0]).is_err());
        assert!(TranslationTrajectory::from_parts(1.0, vec![], vec![]).is_err());
        assert!(TranslationTrajectory::from_parts(0.0, vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn max_radius_of_known_path() {
        let t = TranslationTrajectory::from_parts(1.0, vec![3.0, 0.0], vec![4.0, 1.0]).unwrap();
        assert_eq!(t.max_radius(), 5.0);
    }
}
