//! The 0–1 test: translation variables, mean squared displacement, growth
//! rate per angle `c`, and the multi-`c` aggregate with its classification.

mod classify;
mod growth;
mod msd;
mod runner;
mod translation;

pub use classify::{classify, Regularity, Thresholds};
pub use growth::{growth_rate, growth_rate_correlation, growth_rate_regression, GrowthRate, Method};
pub use msd::{msd, MsdCurve, MsdVariant};
pub use runner::{
    aggregate, growth_rate_at, run_test, Aggregator, TestConfig, TestResult, SHORT_SERIES_LEN,
};
pub use translation::{translation_variables, TranslationTrajectory};
