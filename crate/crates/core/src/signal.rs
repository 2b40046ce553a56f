//! Reference signal generators: sine, sawtooth, two-tone quasi-periodic,
//! linear chirp, Hénon map and uniform noise.
//!
//! Time-parameterised signals are sampled at `t = (j - 1) / fs`, so the first
//! sample sits at `t = 0`.

use std::f64::consts::{SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::UniformSource;
use crate::series::TimeSeries;

pub const DEFAULT_FS: f64 = 5000.0;
pub const DEFAULT_N: usize = 5000;
pub const DEFAULT_F: f64 = 100.0;

/// Base frequency of the quasi-periodic pair; the second tone is `√2` times it.
pub const QUASI_PERIODIC_BASE: f64 = 100.0;

/// Iterates beyond this magnitude count as escaping the attractor.
const DIVERGENCE_LIMIT: f64 = 1e6;

fn check_tone(f: f64, fs: f64) -> Result<()> {
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::InvalidSampleRate(fs));
    }
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::InvalidGenerator(format!("frequency must be positive, got {f}")));
    }
    if f >= fs / 2.0 {
        return Err(Error::Aliasing { f, fs });
    }
    Ok(())
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidGenerator("number of samples must be at least 1".into()));
    }
    Ok(())
}

fn sampled(fs: f64, n: usize, label: &str, y: impl Fn(f64) -> f64) -> Result<TimeSeries> {
    let samples = (0..n).map(|j| y(j as f64 / fs)).collect();
    Ok(TimeSeries::new(samples)?.with_sample_rate(fs)?.with_label(label))
}

/// `sin(2π f t)`.
pub fn gen_sine(f: f64, fs: f64, n: usize) -> Result<TimeSeries> {
    check_tone(f, fs)?;
    check_count(n)?;
    sampled(fs, n, "sine", |t| (TAU * f * t).sin())
}

/// Sawtooth value `2 (t f - floor(1/2 + t f))`, range `[-1, 1)`.
pub fn sawtooth_at(f: f64, t: f64) -> f64 {
    sawtooth_phase(t * f)
}

fn sawtooth_phase(x: f64) -> f64 {
    2.0 * (x - (0.5 + x).floor())
}

pub fn gen_sawtooth(f: f64, fs: f64, n: usize) -> Result<TimeSeries> {
    check_tone(f, fs)?;
    check_count(n)?;
    // cycle position ((j f) mod fs) / fs: fmod is exact, so whenever j f is an
    // exact product the waveform repeats bit for bit from one period to the next
    let samples = (0..n)
        .map(|j| sawtooth_phase((j as f64 * f) % fs / fs))
        .collect();
    Ok(TimeSeries::new(samples)?.with_sample_rate(fs)?.with_label("sawtooth"))
}

/// `cos(2π·100·t) + cos(2π·100·√2·t)`.
pub fn quasi_periodic_at(t: f64) -> f64 {
    let w = TAU * QUASI_PERIODIC_BASE;
    (w * t).cos() + (w * SQRT_2 * t).cos()
}

pub fn gen_quasiperiodic(fs: f64, n: usize) -> Result<TimeSeries> {
    check_tone(QUASI_PERIODIC_BASE * SQRT_2, fs)?;
    check_count(n)?;
    sampled(fs, n, "quasi_periodic", quasi_periodic_at)
}

/// Linear chirp `sin(2π (f0 t + k t²/2))` with `k = (f1 - f0) / sweep_time`.
pub fn chirp_at(f0: f64, f1: f64, sweep_time: f64, t: f64) -> f64 {
    let k = (f1 - f0) / sweep_time;
    (TAU * (f0 * t + 0.5 * k * t * t)).sin()
}

/// Samples the chirp over `[0, sweep_time)`.
pub fn gen_chirp(f0: f64, f1: f64, sweep_time: f64, fs: f64) -> Result<TimeSeries> {
    if !(f0.is_finite() && f1.is_finite() && f0 >= 0.0 && f1 > f0) {
        return Err(Error::InvalidGenerator(format!(
            "chirp needs f1 > f0 >= 0, got f0 = {f0}, f1 = {f1}"
        )));
    }
    if !(sweep_time.is_finite() && sweep_time > 0.0) {
        return Err(Error::InvalidGenerator(format!(
            "sweep time must be positive, got {sweep_time}"
        )));
    }
    check_tone(f1, fs)?;
    // number of sample instants j/fs strictly below the sweep time
    let n = (sweep_time * fs * (1.0 - 1e-12)).ceil() as usize;
    check_count(n)?;
    sampled(fs, n, "chirp", |t| chirp_at(f0, f1, sweep_time, t))
}

/// State of the Hénon map `x' = 1 - a x² + y`, `y' = b x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenonState {
    pub x: f64,
    pub y: f64,
}

impl HenonState {
    pub fn step(self, a: f64, b: f64) -> Self {
        Self {
            x: 1.0 - a * self.x * self.x + self.y,
            y: b * self.x,
        }
    }
}

/// Iterates the map `total` times from `(x0, y0)` and keeps the last `keep`
/// x-values.
pub fn gen_henon(a: f64, b: f64, x0: f64, y0: f64, total: usize, keep: usize) -> Result<TimeSeries> {
    check_count(keep)?;
    if keep > total {
        return Err(Error::InvalidGenerator(format!(
            "cannot keep {keep} of {total} iterates"
        )));
    }
    let mut state = HenonState { x: x0, y: y0 };
    let mut xs = Vec::with_capacity(keep);
    for step in 1..=total {
        state = state.step(a, b);
        if !state.x.is_finite() || state.x.abs() > DIVERGENCE_LIMIT {
            return Err(Error::Divergence { step, x: state.x });
        }
        if step > total - keep {
            xs.push(state.x);
        }
    }
    Ok(TimeSeries::new(xs)?.with_label("henon"))
}

/// `n` independent draws from `U[0, 1)` using the crate's portable source.
pub fn gen_uniform_random(n: usize, seed: u64) -> Result<TimeSeries> {
    check_count(n)?;
    let mut src = UniformSource::new(seed);
    let samples = (0..n).map(|_| src.next_unit()).collect();
    Ok(TimeSeries::new(samples)?.with_label("uniform_random"))
}

mod defaults {
    pub fn f() -> f64 {
        super::DEFAULT_F
    }
    pub fn fs() -> f64 {
        super::DEFAULT_FS
    }
    pub fn n() -> usize {
        super::DEFAULT_N
    }
    pub fn f1() -> f64 {
        100.0
    }
    pub fn sweep_time() -> f64 {
        1.0
    }
    pub fn a() -> f64 {
        1.4
    }
    pub fn b() -> f64 {
        0.3
    }
    pub fn x0() -> f64 {
        0.03
    }
    pub fn total() -> usize {
        100_000
    }
}

/// A generator and its parameters. Omitted fields take the reference values
/// (100 Hz, 5 kHz, 5000 samples; Hénon a = 1.4, b = 0.3, start (0.03, 0.03),
/// last 5000 of 100000 iterates).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Sine {
        #[serde(default = "defaults::f")]
        f: f64,
        #[serde(default = "defaults::fs")]
        fs: f64,
        #[serde(default = "defaults::n")]
        n: usize,
    },
    Sawtooth {
        #[serde(default = "defaults::f")]
        f: f64,
        #[serde(default = "defaults::fs")]
        fs: f64,
        #[serde(default = "defaults::n")]
        n: usize,
    },
    QuasiPeriodic {
        #[serde(default = "defaults::fs")]
        fs: f64,
        #[serde(default = "defaults::n")]
        n: usize,
    },
    Chirp {
        #[serde(default)]
        f0: f64,
        #[serde(default = "defaults::f1")]
        f1: f64,
        #[serde(default = "defaults::sweep_time")]
        sweep_time: f64,
        #[serde(default = "defaults::fs")]
        fs: f64,
    },
    Henon {
        #[serde(default = "defaults::a")]
        a: f64,
        #[serde(default = "defaults::b")]
        b: f64,
        #[serde(default = "defaults::x0")]
        x0: f64,
        #[serde(default = "defaults::x0")]
        y0: f64,
        #[serde(default = "defaults::total")]
        total: usize,
        #[serde(default = "defaults::n")]
        keep: usize,
    },
    UniformRandom {
        #[serde(default = "defaults::n")]
        n: usize,
        #[serde(default)]
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn sine() -> Self {
        GeneratorSpec::Sine { f: DEFAULT_F, fs: DEFAULT_FS, n: DEFAULT_N }
    }

    pub fn sawtooth() -> Self {
        GeneratorSpec::Sawtooth { f: DEFAULT_F, fs: DEFAULT_FS, n: DEFAULT_N }
    }

    pub fn quasi_periodic() -> Self {
        GeneratorSpec::QuasiPeriodic { fs: DEFAULT_FS, n: DEFAULT_N }
    }

    pub fn chirp() -> Self {
        GeneratorSpec::Chirp { f0: 0.0, f1: 100.0, sweep_time: 1.0, fs: DEFAULT_FS }
    }

    pub fn henon() -> Self {
        GeneratorSpec::Henon {
            a: 1.4,
            b: 0.3,
            x0: 0.03,
            y0: 0.03,
            total: 100_000,
            keep: DEFAULT_N,
        }
    }

    pub fn uniform_random(seed: u64) -> Self {
        GeneratorSpec::UniformRandom { n: DEFAULT_N, seed }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Sine { .. } => "sine",
            GeneratorSpec::Sawtooth { .. } => "sawtooth",
            GeneratorSpec::QuasiPeriodic { .. } => "quasi_periodic",
            GeneratorSpec::Chirp { .. } => "chirp",
            GeneratorSpec::Henon { .. } => "henon",
            GeneratorSpec::UniformRandom { .. } => "uniform_random",
        }
    }

    /// Parameter summary, e.g. `f=100 fs=5000 n=5000`.
    pub fn describe(&self) -> String {
        match *self {
            GeneratorSpec::Sine { f, fs, n } | GeneratorSpec::Sawtooth { f, fs, n } => {
                format!("f={f} fs={fs} n={n}")
            }
            GeneratorSpec::QuasiPeriodic { fs, n } => {
                format!("f1={QUASI_PERIODIC_BASE} f2={} fs={fs} n={n}", QUASI_PERIODIC_BASE * SQRT_2)
            }
            GeneratorSpec::Chirp { f0, f1, sweep_time, fs } => {
                format!("f0={f0} f1={f1} sweep_time={sweep_time} fs={fs}")
            }
            GeneratorSpec::Henon { a, b, x0, y0, total, keep } => {
                format!("a={a} b={b} x0={x0} y0={y0} total={total} keep={keep}")
            }
            GeneratorSpec::UniformRandom { n, seed } => format!("n={n} seed={seed}"),
        }
    }

    pub fn generate(&self) -> Result<TimeSeries> {
        match *self {
            GeneratorSpec::Sine { f, fs, n } => gen_sine(f, fs, n),
            GeneratorSpec::Sawtooth { f, fs, n } => gen_sawtooth(f, fs, n),
            GeneratorSpec::QuasiPeriodic { fs, n } => gen_quasiperiodic(fs, n),
            GeneratorSpec::Chirp { f0, f1, sweep_time, fs } => gen_chirp(f0, f1, sweep_time, fs),
            GeneratorSpec::Henon { a, b, x0, y0, total, keep } => gen_henon(a, b, x0, y0, total, keep),
            GeneratorSpec::UniformRandom { n, seed } => gen_uniform_random(n, seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_samples() {
        let s = gen_sine(100.0, 5000.0, 5000).unwrap();
        assert_eq!(s.samples()[0], 0.0);
        // j - 1 = 25 -> t = 5 ms, half a period
        assert!(s.samples()[25].abs() < 1e-12);
        // j - 1 = 12.5 is not a sample; quarter period lands between 12 and 13
        assert!(s.samples()[12] < 1.0 && s.samples()[13] < 1.0);
        assert_eq!(s.sample_rate(), Some(5000.0));
        assert!(matches!(gen_sine(3000.0, 5000.0, 10), Err(Error::Aliasing { .. })));
        assert!(matches!(gen_sine(2500.0, 5000.0, 10), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn sawtooth_points() {
        assert_eq!(sawtooth_at(100.0, 0.0), 0.0);
        assert_eq!(sawtooth_at(100.0, 0.005), -1.0);
        assert!((sawtooth_at(100.0, 0.0025) - 0.5).abs() < 1e-12);
        let s = gen_sawtooth(100.0, 5000.0, 5000).unwrap();
        assert_eq!(s.samples()[25], -1.0);
    }

    #[test]
    fn sawtooth_period_is_fifty_samples() {
        let s = gen_sawtooth(100.0, 5000.0, 5000).unwrap();
        let v = s.samples();
        for j in 0..v.len() - 50 {
            assert_eq!(v[j + 50], v[j], "j = {j}");
        }
        assert!(v.iter().all(|&x| (-1.0..=1.0).contains(&x)));
    }

    #[test]
    fn quasi_periodic_points() {
        assert_eq!(quasi_periodic_at(0.0), 2.0);
        let want = -1.0 + (std::f64::consts::PI * 2f64.sqrt()).cos();
        assert!((quasi_periodic_at(0.005) - want).abs() < 1e-12);
        assert!((quasi_periodic_at(0.005) + 1.26626).abs() < 1e-5);
        assert!(gen_quasiperiodic(280.0, 10).is_err());
        assert!(gen_quasiperiodic(290.0, 10).is_ok());
    }

    #[test]
    fn chirp_points() {
        assert_eq!(chirp_at(0.0, 100.0, 1.0, 0.0), 0.0);
        assert!(chirp_at(0.0, 100.0, 1.0, 1.0).abs() < 1e-12);
        let s = gen_chirp(0.0, 100.0, 1.0, 5000.0).unwrap();
        assert_eq!(s.len(), 5000);
        assert!(s.samples().iter().all(|x| x.abs() <= 1.0));
        assert!(gen_chirp(0.0, 3000.0, 1.0, 5000.0).is_err());
        assert!(gen_chirp(50.0, 50.0, 1.0, 5000.0).is_err());
        assert!(gen_chirp(0.0, 100.0, 0.0, 5000.0).is_err());
    }

    #[test]
    fn henon_first_iterate() {
        let s = HenonState { x: 0.03, y: 0.03 }.step(1.4, 0.3);
        assert!((s.x - 1.02874).abs() < 1e-12);
        assert!((s.y - 0.009).abs() < 1e-15);
        let h = gen_henon(1.4, 0.3, 0.03, 0.03, 1, 1).unwrap();
        assert!((h.samples()[0] - 1.02874).abs() < 1e-12);
    }

    #[test]
    fn henon_collapse_and_errors() {
        let h = gen_henon(0.0, 0.0, 0.5, 0.0, 20, 20).unwrap();
        assert!(h.samples().iter().all(|&x| x == 1.0));
        assert!(gen_henon(1.4, 0.3, 0.03, 0.03, 10, 11).is_err());
        assert!(matches!(
            gen_henon(3.0, 0.3, 2.0, 0.0, 1000, 10),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn henon_reference_run_is_confined() {
        let h = GeneratorSpec::henon().generate().unwrap();
        assert_eq!(h.len(), 5000);
        assert!(h.samples().iter().all(|x| x.abs() < 1.5));
        assert_eq!(h.sample_rate(), None);
    }

    #[test]
    fn uniform_random_stats() {
        for seed in [0, 1, 99, 12345] {
            let s = gen_uniform_random(5000, seed).unwrap();
            assert!(s.samples().iter().all(|x| (0.0..=1.0).contains(x)));
            let m = s.mean();
            assert!((0.48..=0.52).contains(&m), "seed {seed}: mean {m}");
        }
        assert_eq!(gen_uniform_random(64, 5).unwrap(), gen_uniform_random(64, 5).unwrap());
        assert!(gen_uniform_random(0, 5).is_err());
    }

    #[test]
    fn spec_defaults_from_toml() {
        let spec: GeneratorSpec = toml::from_str("kind = \"henon\"").unwrap();
        assert_eq!(spec, GeneratorSpec::henon());
        let spec: GeneratorSpec = toml::from_str("kind = \"sine\"\nf = 50.0").unwrap();
        assert_eq!(spec, GeneratorSpec::Sine { f: 50.0, fs: 5000.0, n: 5000 });
        let spec: GeneratorSpec = toml::from_str("kind = \"chirp\"").unwrap();
        assert_eq!(spec, GeneratorSpec::chirp());
        assert!(toml::from_str::<GeneratorSpec>("kind = \"lorenz\"").is_err());
        assert!(toml::from_str::<GeneratorSpec>("kind = \"sine\"\nfoo = 1").is_err());
    }
}
