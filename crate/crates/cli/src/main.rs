use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zeroone::batch::{run_batch, Manifest};
use zeroone::chaos::{
    run_test, translation_variables, Aggregator, Method, MsdVariant, TestConfig, TestResult,
};
use zeroone::io::{
    export_kc_scatter, export_psd, export_result, export_trajectory, load_series, result_to_json,
    segment, write_series, SeriesFile, SeriesFormat, WindowPlan,
};
use zeroone::signal::GeneratorSpec;
use zeroone::spectral::psd;
use zeroone::{Error, TimeSeries};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DATA: u8 = 4;

/// 0-1 test for chaos on scalar time series.
///
/// Exit codes: 0 success, 2 usage or invalid parameters, 3 I/O failure,
/// 4 unusable data (too short, all-degenerate, missing sample rate, parse error).
#[derive(Parser, Debug)]
#[command(name = "zeroone", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a reference signal as a single-column file.
    Generate(GenerateArgs),
    /// Run the 0-1 test on a series file.
    Analyze(AnalyzeArgs),
    /// Write the normalised power spectral density of a series as CSV.
    Psd(PsdArgs),
    /// Run the test on every input listed in a TOML manifest.
    Batch(BatchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum Kind {
    Sine,
    Sawtooth,
    QuasiPeriodic,
    Chirp,
    Henon,
    UniformRandom,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Signal to generate.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Tone frequency in Hz (sine, sawtooth); end frequency f1 for chirp.
    #[arg(long)]
    f: Option<f64>,
    /// Sampling rate in Hz.
    #[arg(long)]
    fs: Option<f64>,
    /// Number of samples (points kept, for henon; sets the sweep time n/fs for chirp).
    #[arg(long)]
    n: Option<usize>,
    /// Seed for uniform_random.
    #[arg(long)]
    seed: Option<u64>,
    /// Chirp start frequency in Hz.
    #[arg(long)]
    f0: Option<f64>,
    /// Chirp end frequency in Hz (same as --f).
    #[arg(long, conflicts_with = "f")]
    f1: Option<f64>,
    /// Chirp sweep time in seconds.
    #[arg(long, conflicts_with = "n")]
    sweep_time: Option<f64>,
    /// Hénon parameter a.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Hénon parameter b.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Hénon initial x.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Hénon initial y.
    #[arg(long, allow_negative_numbers = true)]
    y0: Option<f64>,
    /// Hénon iterations in total (the last --n are kept).
    #[arg(long)]
    total: Option<usize>,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Regression,
    Correlation,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AggregatorArg {
    Mean,
    Median,
    Trimmed,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum MsdArg {
    Standard,
    OscillationCorrected,
}

/// Test configuration overrides; unset flags keep the defaults (or manifest values).
#[derive(Args, Debug, Default)]
struct ConfigArgs {
    /// Seed for drawing the c values.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random c values [default: 100].
    #[arg(long)]
    num_c: Option<usize>,
    /// Growth-rate estimator [default: correlation].
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Aggregate of |K_c| [default: trimmed].
    #[arg(long, value_enum)]
    aggregator: Option<AggregatorArg>,
    /// Fraction trimmed from each end by the trimmed mean [default: 0.25].
    #[arg(long)]
    trim_fraction: Option<f64>,
    /// N0 = max(2, floor(fraction * N)) lags of the MSD [default: 0.2].
    #[arg(long)]
    n0_fraction: Option<f64>,
    /// Lower end of the c interval [default: 0].
    #[arg(long)]
    c_low: Option<f64>,
    /// Upper end of the c interval [default: 2π].
    #[arg(long)]
    c_high: Option<f64>,
    /// MSD expression [default: standard].
    #[arg(long, value_enum)]
    msd_variant: Option<MsdArg>,
}

impl ConfigArgs {
    fn apply(&self, mut cfg: TestConfig) -> TestConfig {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.num_c {
            cfg.num_c = v;
        }
        if let Some(v) = self.method {
            cfg.method = match v {
                MethodArg::Regression => Method::Regression,
                MethodArg::Correlation => Method::Correlation,
            };
        }
        if let Some(v) = self.aggregator {
            cfg.aggregator = match v {
                AggregatorArg::Mean => Aggregator::Mean,
                AggregatorArg::Median => Aggregator::Median,
                AggregatorArg::Trimmed => Aggregator::TrimmedMean,
            };
        }
        if let Some(v) = self.trim_fraction {
            cfg.trim_fraction = v;
        }
        if let Some(v) = self.n0_fraction {
            cfg.n0_fraction = v;
        }
        if let Some(v) = self.c_low {
            cfg.c_low = v;
        }
        if let Some(v) = self.c_high {
            cfg.c_high = v;
        }
        if let Some(v) = self.msd_variant {
            cfg.msd_variant = match v {
                MsdArg::Standard => MsdVariant::Standard,
                MsdArg::OscillationCorrected => MsdVariant::OscillationCorrected,
            };
        }
        cfg
    }
}

#[derive(Args, Debug)]
struct WindowArgs {
    /// Analyse windows of this many samples (at least 100).
    #[arg(long)]
    window: Option<usize>,
    /// Step between window starts [default: the window length].
    #[arg(long, requires = "window")]
    stride: Option<usize>,
}

impl WindowArgs {
    fn plan(&self) -> Result<Option<WindowPlan>, Error> {
        self.window
            .map(|w| WindowPlan::for_analysis(w, self.stride.unwrap_or(w)))
            .transpose()
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Series file (single column, or a `time,value` CSV).
    input: PathBuf,
    /// Sample rate in Hz, overriding the file.
    #[arg(long)]
    fs: Option<f64>,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Also write the p-q trajectory CSV.
    #[arg(long)]
    trajectory: bool,
    /// Angle c for the trajectory CSV.
    #[arg(long, default_value_t = 2.5, requires = "trajectory")]
    trajectory_c: f64,
    /// Output directory [default: the input's directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PsdArgs {
    /// Series file.
    input: PathBuf,
    /// Sample rate in Hz, overriding the file.
    #[arg(long)]
    fs: Option<f64>,
    /// Output CSV (frequency,power).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// TOML manifest listing inputs and shared configuration.
    manifest: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Output directory for summary.csv and per-input result JSON.
    #[arg(long)]
    out: PathBuf,
}

/// A failed command: message plus exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Self { code: EXIT_USAGE, msg: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidConfig(_)
            | Error::InvalidC(_)
            | Error::InvalidSampleRate(_)
            | Error::Aliasing { .. }
            | Error::InvalidGenerator(_)
            | Error::Divergence { .. }
            | Error::InvalidWindowPlan(_)
            | Error::Manifest(_) => EXIT_USAGE,
            Error::Io(_) | Error::Json(_) => EXIT_IO,
            _ => EXIT_DATA,
        };
        Self { code, msg: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Psd(a) => cmd_psd(a),
        Command::Batch(a) => cmd_batch(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn generator_spec(a: &GenerateArgs) -> Result<GeneratorSpec, Failure> {
    let fs = a.fs.unwrap_or(zeroone::signal::DEFAULT_FS);
    let n = a.n.unwrap_or(zeroone::signal::DEFAULT_N);
    let f = a.f.unwrap_or(zeroone::signal::DEFAULT_F);
    Ok(match a.kind {
        Kind::Sine => GeneratorSpec::Sine { f, fs, n },
        Kind::Sawtooth => GeneratorSpec::Sawtooth { f, fs, n },
        Kind::QuasiPeriodic => GeneratorSpec::QuasiPeriodic { fs, n },
        Kind::Chirp => GeneratorSpec::Chirp {
            f0: a.f0.unwrap_or(0.0),
            f1: a.f1.or(a.f).unwrap_or(100.0),
            sweep_time: a.sweep_time.unwrap_or(n as f64 / fs),
            fs,
        },
        Kind::Henon => {
            let GeneratorSpec::Henon { a: da, b: db, x0: dx, y0: dy, total: dt, .. } =
                GeneratorSpec::henon()
            else {
                unreachable!()
            };
            GeneratorSpec::Henon {
                a: a.a.unwrap_or(da),
                b: a.b.unwrap_or(db),
                x0: a.x0.unwrap_or(dx),
                y0: a.y0.unwrap_or(dy),
                total: a.total.unwrap_or(dt.max(n)),
                keep: n,
            }
        }
        Kind::UniformRandom => GeneratorSpec::UniformRandom { n, seed: a.seed.unwrap_or(0) },
    })
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let spec = generator_spec(&a)?;
    let series = spec.generate().map_err(|e| match e {
        Error::Io(_) => Failure::from(e),
        other => Failure::usage(other),
    })?;
    write_series(&series, &a.out, SeriesFormat::SingleColumn)?;
    println!("kind={} N={} {}", spec.kind(), series.len(), spec.describe());
    Ok(())
}

fn open_series(path: &Path, fs: Option<f64>) -> Result<TimeSeries, Failure> {
    let mut file = SeriesFile::detect(path)?;
    file.sample_rate = fs;
    Ok(load_series(&file)?)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into())
}

fn write_outputs(
    dir: &Path,
    stem: &str,
    series: &TimeSeries,
    result: &TestResult,
    trajectory_c: Option<f64>,
) -> CmdResult {
    export_result(result, dir.join(format!("{stem}.result.json")))?;
    export_kc_scatter(result, dir.join(format!("{stem}.kc.csv")))?;
    if let Some(c) = trajectory_c {
        let traj = translation_variables(series, c).map_err(Failure::usage)?;
        export_trajectory(&traj, dir.join(format!("{stem}.pq.csv")))?;
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> CmdResult {
    let config = a.config.apply(TestConfig::default());
    config.validate()?;
    let plan = a.window.plan()?;
    let trajectory_c = a.trajectory.then_some(a.trajectory_c);
    if let Some(c) = trajectory_c {
        if !(c > 0.0 && c < std::f64::consts::TAU) {
            return Err(Failure::usage(Error::InvalidC(c)));
        }
    }

    let series = open_series(&a.input, a.fs)?;
    let dir = match &a.out {
        Some(d) => d.clone(),
        None => a.input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dir).map_err(Error::from)?;
    }
    let stem = file_stem(&a.input);

    let Some(plan) = plan else {
        let result = run_test(&series, &config)?;
        write_outputs(&dir, &stem, &series, &result, trajectory_c)?;
        report(None, &result);
        return Ok(());
    };
    for (i, window) in segment(&series, plan)?.iter().enumerate() {
        let start = i * plan.stride + 1;
        let result = run_test(window, &config)?;
        write_outputs(&dir, &format!("{stem}@{start}"), window, &result, trajectory_c)?;
        report(Some(start), &result);
    }
    Ok(())
}

fn report(window_start: Option<usize>, r: &TestResult) {
    let prefix = window_start.map(|s| format!("window={s} ")).unwrap_or_default();
    println!("{prefix}K_m={:.6} label={}", r.k_m, r.label);
    if r.short_series {
        eprintln!(
            "note: {}only {} samples; K_m indicates a tendency rather than a converged value",
            prefix, r.num_samples
        );
    }
    if r.degenerate_count() > 0 {
        eprintln!("note: {prefix}{} of {} c values were degenerate", r.degenerate_count(), r.per_c.len());
    }
}

fn cmd_psd(a: PsdArgs) -> CmdResult {
    let series = open_series(&a.input, a.fs)?;
    let estimate = psd(&series)?;
    export_psd(&estimate, &a.out)?;
    let (f, p) = estimate.peak();
    println!("bins={} peak_frequency={f} peak_power={p}", estimate.power.len());
    Ok(())
}

fn sanitize(name: &str) -> String {
    let base = Path::new(name)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| name.to_owned());
    base.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._@-".contains(c) { c } else { '_' })
        .collect()
}

fn cmd_batch(a: BatchArgs) -> CmdResult {
    let mut manifest = Manifest::load(&a.manifest)?;
    manifest.config = a.config.apply(manifest.config);
    if let Some(plan) = a.window.plan()? {
        manifest.window = Some(plan);
    }
    let report = run_batch(&manifest)?;

    std::fs::create_dir_all(&a.out).map_err(Error::from)?;
    for (i, row) in report.rows.iter().enumerate() {
        if let Ok(result) = &row.outcome {
            let name = format!("{:03}_{}.result.json", i + 1, sanitize(&row.source));
            std::fs::write(a.out.join(name), result_to_json(result)?).map_err(Error::from)?;
        }
    }
    std::fs::write(a.out.join("summary.csv"), report.summary_csv()).map_err(Error::from)?;

    for row in &report.rows {
        match &row.outcome {
            Ok(r) => println!("{} K_m={:.6} label={}", row.source, r.k_m, r.label),
            Err(e) => println!("{} error: {e}", row.source),
        }
    }
    if report.all_failed() {
        return Err(Failure { code: EXIT_DATA, msg: "every input failed".into() });
    }
    Ok(())
}
