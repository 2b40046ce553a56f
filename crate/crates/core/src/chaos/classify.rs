use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regularity class assigned to an aggregate `K_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    QuasiPeriodic,
    Aperiodic,
    ChaoticOrStochastic,
}

impl Regularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Regularity::Regular => "regular",
            Regularity::QuasiPeriodic => "quasi_periodic",
            Regularity::Aperiodic => "aperiodic",
            Regularity::ChaoticOrStochastic => "chaotic_or_stochastic",
        }
    }
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lower bounds of the quasi-periodic, aperiodic and chaotic bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub quasi_periodic: f64,
    pub aperiodic: f64,
    pub chaotic: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            quasi_periodic: 0.2,
            aperiodic: 0.5,
            chaotic: 0.8,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let t = [self.quasi_periodic, self.aperiodic, self.chaotic];
        let ordered = t.iter().all(|v| v.is_finite() && *v >= 0.0) && t[0] < t[1] && t[1] < t[2];
        if ordered {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "classification thresholds must be increasing and non-negative, got {t:?}"
            )))
        }
    }

    pub fn classify(&self, k_m: f64) -> Result<Regularity> {
        if k_m.is_nan() || k_m < 0.0 {
            return Err(Error::NegativeKm(k_m));
        }
        Ok(if k_m < self.quasi_periodic {
            Regularity::Regular
        } else if k_m < self.aperiodic {
            Regularity::QuasiPeriodic
        } else if k_m < self.chaotic {
            Regularity::Aperiodic
        } else {
            Regularity::ChaoticOrStochastic
        })
    }
}

/// Classifies with the default bands: `<0.2`, `<0.5`, `<0.8`, rest.
pub fn classify(k_m: f64) -> Result<Regularity> {
    Thresholds::default().classify(k_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(classify(0.094).unwrap(), Regularity::Regular);
        assert_eq!(classify(0.357).unwrap(), Regularity::QuasiPeriodic);
        assert_eq!(classify(0.520).unwrap(), Regularity::Aperiodic);
        assert_eq!(classify(0.99).unwrap(), Regularity::ChaoticOrStochastic);
    }

    #[test]
    fn band_edges_are_inclusive_below() {
        assert_eq!(classify(0.0).unwrap(), Regularity::Regular);
        assert_eq!(classify(0.2).unwrap(), Regularity::QuasiPeriodic);
        assert_eq!(classify(0.5).unwrap(), Regularity::Aperiodic);
        assert_eq!(classify(0.8).unwrap(), Regularity::ChaoticOrStochastic);
        assert_eq!(classify(1.7).unwrap(), Regularity::ChaoticOrStochastic);
    }

    #[test]
    fn negative_rejected() {
        assert!(matches!(classify(-0.01), Err(Error::NegativeKm(_))));
        assert!(classify(f64::NAN).is_err());
    }

    #[test]
    fn overridden_thresholds() {
        let t = Thresholds {
            quasi_periodic: 0.1,
            aperiodic: 0.3,
            chaotic: 0.6,
        };
        assert_eq!(t.classify(0.15).unwrap(), Regularity::QuasiPeriodic);
        assert_eq!(t.classify(0.65).unwrap(), Regularity::ChaoticOrStochastic);
        let bad = Thresholds {
            aperiodic: 0.1,
            ..Thresholds::default()
        };
        assert!(bad.validate().is_err());
    }
}
