//! The 0–1 test for chaos on scalar time series.
//!
//! A series `s(n)` is mapped to the planar path `p_c(n) = Σ s(j) cos(jc)`,
//! `q_c(n) = Σ s(j) sin(jc)`. Bounded paths mean regular dynamics; paths that
//! spread like a random walk mean chaos. The mean squared displacement of the
//! path is reduced to a growth rate `K_c` per angle `c`, and `|K_c|` over many
//! random angles is aggregated into `K_m`, which is then binned into
//! regular / quasi-periodic / aperiodic / chaotic-or-stochastic.
//!
//! ```
//! use zeroone::{chaos::{run_test, Regularity, TestConfig}, signal::GeneratorSpec};
//!
//! let henon = GeneratorSpec::henon().generate().unwrap();
//! let result = run_test(&henon, &TestConfig { num_c: 20, ..Default::default() }).unwrap();
//! assert_eq!(result.label, Regularity::ChaoticOrStochastic);
//! ```

pub mod batch;
pub mod chaos;
pub mod error;
pub mod io;
pub mod rng;
pub mod series;
pub mod signal;
pub mod spectral;

pub use error::{Error, Result};
pub use series::TimeSeries;
