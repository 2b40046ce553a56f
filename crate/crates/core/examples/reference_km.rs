//! Prints K_m for the six reference signals over a few seeds.
//!
//! cargo run --release -p zeroone --example reference_km [seeds]

use std::time::Instant;

use zeroone::chaos::{run_test, TestConfig};
use zeroone::signal::GeneratorSpec;

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let signals = [
        GeneratorSpec::sine(),
        GeneratorSpec::sawtooth(),
        GeneratorSpec::quasi_periodic(),
        GeneratorSpec::chirp(),
        GeneratorSpec::henon(),
        GeneratorSpec::uniform_random(1),
    ];
    for spec in &signals {
        let series = spec.generate().expect("reference parameters are valid");
        let start = Instant::now();
        let values: Vec<String> = (0..seeds)
            .map(|seed| {
                let cfg = TestConfig { seed, ..Default::default() };
                let r = run_test(&series, &cfg).expect("reference run");
                format!("{:.3}", r.k_m)
            })
            .collect();
        let per_run = start.elapsed().as_secs_f64() / seeds as f64;
        println!("{:<16} {}  ({per_run:.2} s/run)", spec.kind(), values.join(" "));
    }
}
