//! `dzc`: generate codes, simulate channels, estimate ranges, map
//! ambiguity functions and run Monte-Carlo benches.
//!
//! Exit status is 0 on success, 2 for usage or configuration errors and 1
//! for runtime failures. Every error is one `error[<tag>]: ...` line on stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use dzc_ranging::channel::{apply_channel_fixed, ChannelSpec};
use dzc_ranging::correlation::{circular_xcorr, diff_sliding_corr};
use dzc_ranging::estimators::{
    ambiguity_map, ml_estimate, Acoustics, CrossSpectrum, MlSearchConfig, Pipeline, PipelineConfig, RangeEstimate,
};
use dzc_ranging::fft::fft;
use dzc_ranging::harness::{parse_config, run_experiment, summarize, summary_csv, trials_csv, SCHEMA_HEADER};
use dzc_ranging::iq::{read_iq, write_iq, IqMeta};
use dzc_ranging::{CodeKind, Error, SequenceSpec, DEFAULT_C, DEFAULT_FC, DEFAULT_FS};

#[derive(Parser)]
#[command(name = "dzc", version, about = "Differential Zadoff-Chu ultrasound ranging toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a ZC or DZC code as an IQ file with sidecar.
    Gen(GenArgs),
    /// Pass an IQ file through a fixed delay-Doppler channel.
    Simulate(SimArgs),
    /// Estimate the range from a received IQ file.
    Estimate(EstArgs),
    /// Noiseless ML ambiguity map as CSV.
    Ambiguity(AmbArgs),
    /// Monte-Carlo experiment from a config file.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Zc,
    Dzc,
}

impl From<Kind> for CodeKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Zc => CodeKind::Zc,
            Kind::Dzc => CodeKind::Dzc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Differential correlation of one code block plus phase refinement (DZC).
    Diff,
    /// ML grid search over delay and carrier offset.
    Ml,
    /// Plain cross-correlation (ZC).
    Xcorr,
    /// Sliding-window pipeline over the whole stream (DZC), one row per window.
    Reduced,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value = "dzc")]
    kind: Kind,
    /// Samples to write; defaults to N.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_FS)]
    fs: f64,
    #[arg(long, default_value_t = DEFAULT_FC)]
    fc: f64,
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Delay in samples.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Relative Doppler v/c.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// Carrier offset, cycles/sample.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// SNR in dB, or `inf` for no noise.
    #[arg(long, default_value = "inf", allow_negative_numbers = true)]
    snr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value = "diff")]
    algo: Algo,
    /// Code in the file; defaults to the sidecar `kind`, else DZC (ZC for `xcorr`).
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Override the sidecar sample rate.
    #[arg(long)]
    fs: Option<f64>,
    #[arg(long)]
    fc: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AmbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value = "dzc")]
    kind: Kind,
    /// True delay of the probe block, samples.
    #[arg(long)]
    tau: usize,
    /// True carrier offset, cycles/sample.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    /// Doppler grid step; defaults to 1/(4N).
    #[arg(long)]
    nu_step: Option<f64>,
    /// Doppler grid half-width; defaults to M/2.
    #[arg(long)]
    nu_halfwidth: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Flat key=value file, or a JSON object.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

struct Failure {
    code: u8,
    tag: &'static str,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, tag) = match &e {
            Error::NotCoprime { .. } | Error::InvalidSpec(_) => (2, "spec"),
            Error::Config(_) | Error::OutOfRange(_) => (2, "config"),
            Error::Io(_) => (1, "io"),
            Error::LengthMismatch { .. } | Error::TooShort { .. } | Error::NoValidBins | Error::EmptyGrid => {
                (1, "runtime")
            }
        };
        let msg = match e {
            Error::Config(m) | Error::Io(m) => m,
            other => other.to_string(),
        };
        Failure { code, tag, msg }
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, tag: "io", msg: format!("{}: {e}", path.display()) }
}

type Out<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Estimate(a) => estimate(a),
        Cmd::Ambiguity(a) => ambiguity(a),
        Cmd::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.tag, f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Out<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_fail(p, e)),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_fail(Path::new("<stdout>"), e)),
                _ => Ok(()),
            }
        }
    }
}

fn gen(a: GenArgs) -> Out<()> {
    let spec = SequenceSpec::new(a.n, a.m, a.kind.into())?;
    let len = a.length.unwrap_or(a.n);
    if len == 0 {
        return Err(Error::Config("length must be >= 1".into()).into());
    }
    let ac = Acoustics { fs: a.fs, fc: a.fc, c: a.c };
    ac.validate().map_err(|e| Error::Config(e.to_string()))?;
    let mut meta = IqMeta::new(a.fs, a.fc, a.c);
    meta.extra.insert("kind".into(), spec.kind.name().into());
    meta.extra.insert("n".into(), a.n.to_string());
    meta.extra.insert("m".into(), a.m.to_string());
    write_iq(&a.out, &spec.symbols(0, len), &meta)?;
    Ok(())
}

fn simulate(a: SimArgs) -> Out<()> {
    let (x, meta) = read_iq(&a.input)?;
    let ch = ChannelSpec {
        tau_samples: a.tau,
        delta: a.delta,
        nu: a.nu,
        theta: a.theta,
        alpha: a.alpha,
        snr_db: a.snr,
        seed: a.seed,
    };
    ch.validate()?;
    let y = apply_channel_fixed(&x, &ch)?;
    write_iq(&a.out, &y, &meta)?;
    Ok(())
}

fn estimate(a: EstArgs) -> Out<()> {
    let (y, meta) = read_iq(&a.input)?;
    let ac = Acoustics { fs: a.fs.unwrap_or(meta.fs), fc: a.fc.unwrap_or(meta.fc), c: a.c.unwrap_or(meta.c) };
    ac.validate().map_err(|e| Error::Config(e.to_string()))?;
    let default_kind = match meta.extra.get("kind") {
        Some(k) => k.parse::<CodeKind>()?,
        None if matches!(a.algo, Algo::Xcorr) => CodeKind::Zc,
        None => CodeKind::Dzc,
    };
    let spec = SequenceSpec::new(a.n, a.m, a.kind.map_or(default_kind, Into::into))?;
    if y.len() < spec.n {
        return Err(Error::TooShort { needed: spec.n, have: y.len() }.into());
    }
    let block = &y[..spec.n];
    let rows: Vec<(usize, RangeEstimate)> = match a.algo {
        Algo::Xcorr => {
            let r = circular_xcorr(&spec.symbols(0, spec.n), block)?;
            vec![(0, RangeEstimate::new(r.peak_index as i64, 0.0, r.peak_magnitude, &ac))]
        }
        Algo::Diff => vec![(0, diff_block(block, &spec, &ac)?)],
        Algo::Ml => {
            let cfg = MlSearchConfig { acoustics: ac, ..MlSearchConfig::for_spec(&spec) };
            vec![(0, ml_estimate(block, &spec, &cfg)?)]
        }
        Algo::Reduced => {
            let cfg = PipelineConfig { acoustics: ac, ..PipelineConfig::for_n(spec.n) };
            let step = cfg.window_step;
            let mut p = Pipeline::new(spec, cfg)?;
            let first = p.first_window();
            let last = p.last_window(y.len()).ok_or(Error::TooShort { needed: p.stream_len_for(1), have: y.len() })?;
            let mut out = Vec::new();
            for i in (first..=last).step_by(step) {
                out.push((i, p.process_window(&y, i)?));
            }
            out
        }
    };
    let mut csv = format!("{SCHEMA_HEADER}\nwindow,tau_hat,nu_hat,d_hat_m,refinement_mm,metric\n");
    for (i, e) in rows {
        writeln!(csv, "{i},{},{},{},{},{}", e.tau_hat, e.nu_hat, e.d_hat, e.refinement_mm, e.metric).unwrap();
    }
    emit(a.out.as_deref(), &csv)
}

/// Integer delay from the circular differential correlation, then the
/// phase slope against the code delayed by that amount.
fn diff_block(block: &[Complex64], spec: &SequenceSpec, ac: &Acoustics) -> Out<RangeEstimate> {
    let r = diff_sliding_corr(&spec.symbols(0, spec.n), block, 1)?;
    let tau = r.peak_index as i64;
    let z = fft(&spec.symbols(-tau, spec.n));
    let bins = CrossSpectrum::valid_bins(&z, PipelineConfig::default().valid_bin_ratio);
    if bins.is_empty() {
        return Err(Error::NoValidBins.into());
    }
    let fit = CrossSpectrum::new(&z, &fft(block), bins).fit(0, Default::default());
    Ok(RangeEstimate::new(tau, fit.delay * ac.metres_per_sample() * 1e3, r.peak_magnitude, ac))
}

fn ambiguity(a: AmbArgs) -> Out<()> {
    let spec = SequenceSpec::new(a.n, a.m, a.kind.into())?;
    if a.tau >= spec.n {
        return Err(Error::Config(format!("tau {} must be < N={}", a.tau, spec.n)).into());
    }
    let base = MlSearchConfig::for_spec(&spec);
    let grid = MlSearchConfig {
        nu_step: a.nu_step.unwrap_or(base.nu_step),
        nu_halfwidth: a.nu_halfwidth.unwrap_or(base.nu_halfwidth),
        ..base
    };
    grid.validate().map_err(|e| Error::Config(e.to_string()))?;
    let nus = grid.nu_grid();
    let map = ambiguity_map(&spec, a.tau, a.nu, &grid.tau_grid, &nus)?;
    let mut csv = format!("{SCHEMA_HEADER}\ntau");
    for nu in &nus {
        write!(csv, ",{nu}").unwrap();
    }
    csv.push('\n');
    for (tau, row) in grid.tau_grid.iter().zip(&map) {
        write!(csv, "{tau}").unwrap();
        for v in row {
            write!(csv, ",{v}").unwrap();
        }
        csv.push('\n');
    }
    emit(a.out.as_deref(), &csv)
}

fn bench(a: BenchArgs) -> Out<()> {
    let text = fs::read_to_string(&a.config).map_err(|e| io_fail(&a.config, e))?;
    let cfg = parse_config(&text)?;
    cfg.validate()?;
    let records = run_experiment(&cfg)?;
    let summary = summarize(&records, cfg.threshold_mm, &cfg.acoustics);
    fs::create_dir_all(&a.out_dir).map_err(|e| io_fail(&a.out_dir, e))?;
    let trials = a.out_dir.join("trials.csv");
    fs::write(&trials, trials_csv(&records)).map_err(|e| io_fail(&trials, e))?;
    let sum = a.out_dir.join("summary.csv");
    fs::write(&sum, summary_csv(&summary)).map_err(|e| io_fail(&sum, e))?;
    Ok(())
}
