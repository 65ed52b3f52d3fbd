//! Seeded Monte-Carlo experiments over the estimators, with summaries
//! and CSV output.
//!
//! Every trial derives its own seed from `(base_seed, trial_id, snr index)`,
//! so results do not depend on scheduling and parallel runs match serial ones.

use num_complex::Complex64;
use rayon::prelude::*;
use std::time::Instant;

use crate::channel::{apply_channel_fixed, apply_channel_moving, ChannelSpec, MotionProfile, Velocity};
use crate::correlation::{circular_xcorr, diff_sliding_corr};
use crate::error::{Error, Result};
use crate::estimators::pipeline::{default_candidate_window, default_segment_length};
use crate::estimators::{initial_tof_window, ml_estimate, Acoustics, MlSearchConfig, Pipeline, PipelineConfig, RefineMode};
use crate::sequences::{gcd, CodeKind, SequenceSpec};
use crate::tolerances::HALF_LAMBDA_M;

pub mod config;
pub mod stats;

pub use config::parse_config;
use stats::exact_mean;

pub const SCHEMA_HEADER: &str = concat!("# dzc-ranging v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    FixedDoppler,
    ConstantVelocity,
    /// Trapezoidal accelerate, cruise, decelerate profile.
    VelocityProfile,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::FixedDoppler => "fixed_doppler",
            Scenario::ConstantVelocity => "constant_velocity",
            Scenario::VelocityProfile => "velocity_profile",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed_doppler" => Ok(Scenario::FixedDoppler),
            "constant_velocity" => Ok(Scenario::ConstantVelocity),
            "velocity_profile" => Ok(Scenario::VelocityProfile),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    XcorrZc,
    DiffDzc,
    MlZc,
    MlDzc,
    ReducedDzc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::XcorrZc, Algorithm::DiffDzc, Algorithm::MlZc, Algorithm::MlDzc, Algorithm::ReducedDzc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::XcorrZc => "xcorr_zc",
            Algorithm::DiffDzc => "diff_dzc",
            Algorithm::MlZc => "ml_zc",
            Algorithm::MlDzc => "ml_dzc",
            Algorithm::ReducedDzc => "reduced_dzc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }

    fn code(self) -> CodeKind {
        match self {
            Algorithm::XcorrZc | Algorithm::MlZc => CodeKind::Zc,
            _ => CodeKind::Dzc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    /// Initial delay in samples.
    pub tau: f64,
    /// Fixed-Doppler scenario only.
    pub delta: f64,
    pub nu: f64,
    pub theta: f64,
    /// m/s, positive approaching; cruise speed for the profile scenario.
    pub velocity: f64,
    pub snr_grid: Vec<f64>,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub base_seed: u64,
    pub acoustics: Acoustics,
    pub integration_periods: usize,
    pub segment_length: Option<usize>,
    pub window_step: Option<usize>,
    pub candidate_window: Option<usize>,
    pub valid_bin_ratio: f64,
    pub refine_mode: RefineMode,
    pub doppler_segments: usize,
    /// Start the pipeline from the true Doppler (steady-state tracking)
    /// rather than from a static assumption.
    pub doppler_prior: bool,
    /// Doppler updates made before the evaluated window, beyond the
    /// segments needed to fill the first pool.
    pub warmup_segments: usize,
    pub ml_nu_halfwidth: Option<f64>,
    pub ml_nu_step: Option<f64>,
    pub ml_coupled: bool,
    pub record_runtime: bool,
    pub threshold_mm: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::FixedDoppler,
            n: 21,
            m: 1,
            tau: 10.0,
            delta: 0.0,
            nu: 0.0,
            theta: 0.0,
            velocity: 0.0,
            snr_grid: vec![f64::INFINITY],
            trials: 500,
            algorithms: vec![Algorithm::DiffDzc],
            base_seed: 1,
            acoustics: Acoustics::default(),
            integration_periods: 1,
            segment_length: None,
            window_step: None,
            candidate_window: None,
            valid_bin_ratio: 0.5,
            refine_mode: RefineMode::Weighted,
            doppler_segments: 1,
            doppler_prior: true,
            warmup_segments: 2,
            ml_nu_halfwidth: None,
            ml_nu_step: None,
            ml_coupled: false,
            record_runtime: false,
            threshold_mm: HALF_LAMBDA_M * 1e3,
        }
    }
}

/// Samples pooled per Doppler update by the pipeline preset. Fixed in time so
/// that short codes do not estimate velocity over a shorter baseline.
pub const PRESET_DOPPLER_SPAN: usize = 4096;

/// Code periods integrated per estimate by the pipeline preset. Signal
/// energy per estimate therefore grows with the code length.
pub const PRESET_PERIODS: usize = 8;

/// Series spacing for the pipeline preset: the largest divisor of `n` not
/// above `max(n/4, 64)` samples. Short codes otherwise spend most of their
/// time on densely spaced windows that add little to a long Doppler pool.
pub fn preset_segment_length(n: usize) -> usize {
    let cap = (n / 4).max(64);
    (1..=cap.min(n)).rev().find(|d| n % d == 0).unwrap_or(1)
}

/// Whole code periods covering at least `span` samples.
pub fn periods_for_span(n: usize, span: usize) -> usize {
    span.div_ceil(n).max(1)
}

impl ExperimentConfig {
    /// ML comparison at N=21, τ=10, M=1, ν=1 over −10..20 dB.
    pub fn ml_preset() -> Self {
        ExperimentConfig {
            n: 21,
            m: 1,
            tau: 10.0,
            nu: 1.0,
            snr_grid: vec![-10.0, 0.0, 10.0, 20.0],
            algorithms: vec![Algorithm::MlZc, Algorithm::MlDzc],
            ..Default::default()
        }
    }

    /// Reduced-complexity pipeline tracking a target at constant speed.
    pub fn pipeline_preset(n: usize, velocity: f64, snr_grid: Vec<f64>) -> Self {
        ExperimentConfig {
            scenario: Scenario::ConstantVelocity,
            n,
            m: 1,
            tau: n as f64 / 3.0 + 0.37,
            velocity,
            snr_grid,
            algorithms: vec![Algorithm::ReducedDzc],
            segment_length: Some(preset_segment_length(n)),
            integration_periods: PRESET_PERIODS,
            doppler_segments: periods_for_span(n, PRESET_DOPPLER_SPAN),
            ..Default::default()
        }
    }

    pub fn spec(&self, kind: CodeKind) -> Result<SequenceSpec> {
        SequenceSpec::new(self.n, self.m, kind)
    }

    pub fn validate(&self) -> Result<()> {
        if gcd(self.n, self.m) != 1 {
            return Err(Error::Config(format!("M and N must be coprime (N={}, M={})", self.n, self.m)));
        }
        SequenceSpec::new(self.n, self.m, CodeKind::Dzc).map_err(|e| Error::Config(e.to_string()))?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.snr_grid.is_empty() || self.snr_grid.iter().any(|s| s.is_nan()) {
            return Err(Error::Config("snr grid must be non-empty".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if !(self.tau >= 0.0) {
            return Err(Error::Config("tau must be >= 0".into()));
        }
        if !(self.velocity.abs() < 0.05 * self.acoustics.c) || !(self.delta.abs() < 0.05) {
            return Err(Error::Config("velocity or delta outside the 0.05 c guard band".into()));
        }
        if !(self.threshold_mm > 0.0) {
            return Err(Error::Config("threshold_mm must be positive".into()));
        }
        self.pipeline_config(0.0)?.validate(self.n).map_err(|e| Error::Config(e.to_string()))?;
        self.acoustics.validate().map_err(|e| Error::Config(e.to_string()))
    }

    fn pipeline_config(&self, initial_delta: f64) -> Result<PipelineConfig> {
        let segment_length = self.segment_length.unwrap_or_else(|| default_segment_length(self.n));
        Ok(PipelineConfig {
            segment_length,
            window_step: self.window_step.unwrap_or(segment_length),
            candidate_window: self.candidate_window.unwrap_or_else(|| default_candidate_window(self.n)),
            valid_bin_ratio: self.valid_bin_ratio,
            acoustics: self.acoustics,
            refine_mode: self.refine_mode,
            integration_periods: self.integration_periods,
            doppler_segments: self.doppler_segments,
            initial_delta,
        })
    }

    fn ml_config(&self, spec: &SequenceSpec, nu_center: f64) -> MlSearchConfig {
        let base = MlSearchConfig::for_spec(spec);
        MlSearchConfig {
            nu_center,
            nu_halfwidth: self.ml_nu_halfwidth.unwrap_or(base.nu_halfwidth),
            nu_step: self.ml_nu_step.unwrap_or(base.nu_step),
            delta_from_nu: self.ml_coupled,
            acoustics: self.acoustics,
            ..base
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_id: usize,
    pub snr_db: f64,
    pub algorithm: Algorithm,
    pub true_tau: f64,
    /// −1 when the estimator failed.
    pub tau_hat: i64,
    pub true_d_m: f64,
    pub d_hat_m: f64,
    pub error_mm: f64,
    pub runtime_ns: u64,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        self.d_hat_m.is_nan()
    }
}

/// Per-trial seed: a SplitMix64 chain over the three identifiers.
pub fn trial_seed(base_seed: u64, trial_id: usize, snr_index: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(base_seed) ^ trial_id as u64) ^ (snr_index as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Synthesised inputs shared by every algorithm in one trial.
struct Scene {
    /// Received length-N block per code (fixed scenario) or stream per code.
    zc: Vec<Complex64>,
    dzc: Vec<Complex64>,
    /// Window evaluated by the block estimators.
    block_start: usize,
    block_tau: f64,
    /// Window evaluated by the pipeline, with its truth.
    pipe_window: usize,
    pipe_truth: f64,
    pipe_delta: f64,
    nu_at_block: f64,
}

struct Layout {
    stream_len: usize,
    pipe_window: usize,
    block_start: usize,
}

fn layout(cfg: &ExperimentConfig) -> Result<Layout> {
    let dzc = cfg.spec(CodeKind::Dzc)?;
    let period = dzc.period();
    let pipe = Pipeline::new(dzc, cfg.pipeline_config(0.0)?)?;
    let step = cfg.window_step.unwrap_or_else(|| cfg.segment_length.unwrap_or_else(|| default_segment_length(cfg.n)));
    let windows = (cfg.warmup_segments + cfg.doppler_segments) * cfg.n / step + 1;
    let min_len = pipe.stream_len_for(windows).max(2 * period + cfg.n + 1);
    let stream_len = min_len.div_ceil(period) * period;
    let pipe_window = pipe.last_window(stream_len).expect("stream sized for the pipeline");
    // Block window: a whole number of code periods in, so the block code is the template.
    let block_start = (pipe_window / period) * period;
    Ok(Layout { stream_len, pipe_window, block_start })
}

fn velocity_model(cfg: &ExperimentConfig, len: usize) -> Velocity {
    match cfg.scenario {
        Scenario::ConstantVelocity => Velocity::Constant(cfg.velocity),
        _ => Velocity::Trapezoid { start: 0, ramp: len / 4, cruise: len / 2, peak: cfg.velocity },
    }
}

/// Sample instant a pipeline estimate refers to: middle of its integrated span.
fn pipe_reference(cfg: &ExperimentConfig, window: usize) -> f64 {
    let span_start = window - (cfg.integration_periods - 1) * cfg.n;
    span_start as f64 + ((cfg.integration_periods * cfg.n) as f64 - 1.0) / 2.0
}

fn build_scene(cfg: &ExperimentConfig, lay: &Layout, snr: f64, seed: u64) -> Result<Scene> {
    let n = cfg.n;
    let zc_spec = cfg.spec(CodeKind::Zc)?;
    let dzc_spec = cfg.spec(CodeKind::Dzc)?;
    let ac = cfg.acoustics;
    match cfg.scenario {
        Scenario::FixedDoppler => {
            let ch = ChannelSpec {
                tau_samples: cfg.tau,
                delta: cfg.delta,
                nu: cfg.nu,
                theta: cfg.theta,
                alpha: 1.0,
                snr_db: snr,
                seed,
            };
            let zc = apply_channel_fixed(&zc_spec.symbols(0, n), &ch)?;
            let dzc = if cfg.algorithms.contains(&Algorithm::ReducedDzc) {
                apply_channel_fixed(&dzc_spec.symbols(0, lay.stream_len), &ch)?
            } else {
                apply_channel_fixed(&dzc_spec.symbols(0, n), &ch)?
            };
            let pipe_center = pipe_reference(cfg, lay.pipe_window);
            Ok(Scene {
                zc,
                dzc,
                block_start: 0,
                block_tau: cfg.tau,
                pipe_window: lay.pipe_window,
                // Delay at time t under x((1+Δ)(t−τ)).
                pipe_truth: (1.0 + cfg.delta) * cfg.tau - cfg.delta * pipe_center,
                pipe_delta: cfg.delta,
                nu_at_block: cfg.nu,
            })
        }
        Scenario::ConstantVelocity | Scenario::VelocityProfile => {
            let motion = MotionProfile {
                velocity: velocity_model(cfg, lay.stream_len),
                c: ac.c,
                fs: ac.fs,
                fc: ac.fc,
                initial_delay: cfg.tau,
            };
            let zc = apply_channel_moving(&zc_spec.symbols(0, lay.stream_len), &motion, cfg.theta, 1.0, snr, seed)?;
            let dzc = apply_channel_moving(&dzc_spec.symbols(0, lay.stream_len), &motion, cfg.theta, 1.0, snr, seed)?;
            let block_center = lay.block_start as f64 + (n as f64 - 1.0) / 2.0;
            let pipe_center = pipe_reference(cfg, lay.pipe_window);
            Ok(Scene {
                zc,
                dzc,
                block_start: lay.block_start,
                block_tau: motion.delay_at(block_center),
                pipe_window: lay.pipe_window,
                pipe_truth: motion.delay_at(pipe_center),
                pipe_delta: motion.velocity.at(0) / ac.c,
                nu_at_block: ac.nu_from_delta(motion.velocity.at(lay.block_start) / ac.c),
            })
        }
    }
}

fn estimate(cfg: &ExperimentConfig, scene: &Scene, alg: Algorithm) -> Result<(i64, f64)> {
    let n = cfg.n;
    let spec = cfg.spec(alg.code())?;
    let mps = cfg.acoustics.metres_per_sample();
    let block = |x: &[Complex64]| -> Vec<Complex64> { x[scene.block_start..scene.block_start + n].to_vec() };
    match alg {
        Algorithm::XcorrZc => {
            let r = circular_xcorr(&spec.symbols(0, n), &block(&scene.zc))?;
            Ok((r.peak_index as i64, r.peak_index as f64 * mps))
        }
        Algorithm::DiffDzc => {
            let tau = if cfg.scenario == Scenario::FixedDoppler && scene.dzc.len() == n {
                diff_sliding_corr(&spec.symbols(0, n), &scene.dzc, 1)?.peak_index as i64
            } else {
                let pc = cfg.pipeline_config(0.0)?;
                initial_tof_window(&scene.dzc, &spec, scene.block_start, &pc)?.tau_hat
            };
            Ok((tau, tau as f64 * mps))
        }
        Algorithm::MlZc | Algorithm::MlDzc => {
            let x = if alg == Algorithm::MlZc { &scene.zc } else { &scene.dzc };
            let est = ml_estimate(&block(x), &spec, &cfg.ml_config(&spec, scene.nu_at_block))?;
            Ok((est.tau_hat, est.d_hat))
        }
        Algorithm::ReducedDzc => {
            let prior = if cfg.doppler_prior { scene.pipe_delta } else { 0.0 };
            let mut p = Pipeline::new(spec, cfg.pipeline_config(prior)?)?;
            let first = p.first_window();
            let step = cfg.pipeline_config(prior)?.window_step;
            let mut last = None;
            for i in (first..=scene.pipe_window).step_by(step) {
                last = Some(p.process_window(&scene.dzc, i)?);
            }
            let est = last.ok_or(Error::TooShort { needed: first, have: scene.pipe_window })?;
            Ok((est.tau_hat, est.d_hat))
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, lay: &Layout, snr_index: usize, trial_id: usize) -> Vec<TrialRecord> {
    let snr = cfg.snr_grid[snr_index];
    let seed = trial_seed(cfg.base_seed, trial_id, snr_index);
    let mps = cfg.acoustics.metres_per_sample();
    let scene = build_scene(cfg, lay, snr, seed);
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let start = Instant::now();
            let (true_tau, result) = match &scene {
                Ok(s) => {
                    let truth = if alg == Algorithm::ReducedDzc { s.pipe_truth } else { s.block_tau };
                    (truth, estimate(cfg, s, alg))
                }
                Err(e) => (f64::NAN, Err(e.clone())),
            };
            let runtime_ns = if cfg.record_runtime { start.elapsed().as_nanos() as u64 } else { 0 };
            let true_d_m = true_tau * mps;
            let (tau_hat, d_hat_m) = result.unwrap_or((-1, f64::NAN));
            TrialRecord {
                trial_id,
                snr_db: snr,
                algorithm: alg,
                true_tau,
                tau_hat,
                true_d_m,
                d_hat_m,
                error_mm: (d_hat_m - true_d_m).abs() * 1000.0,
                runtime_ns,
            }
        })
        .collect()
}

fn run(cfg: &ExperimentConfig, parallel: bool) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let lay = layout(cfg)?;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.snr_grid.len()).flat_map(|s| (0..cfg.trials).map(move |t| (s, t))).collect();
    let nested: Vec<Vec<TrialRecord>> = if parallel {
        jobs.par_iter().map(|&(s, t)| run_trial(cfg, &lay, s, t)).collect()
    } else {
        jobs.iter().map(|&(s, t)| run_trial(cfg, &lay, s, t)).collect()
    };
    Ok(nested.into_iter().flatten().collect())
}

/// All trials for every SNR and algorithm, ordered by SNR, trial, algorithm.
/// Estimator failures are recorded (NaN estimate), not returned as errors.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run(cfg, true)
}

pub fn run_experiment_serial(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run(cfg, false)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub snr_db: f64,
    pub mse_samples2: f64,
    pub mse_mm2: f64,
    pub rmse_mm: f64,
    pub p_within: f64,
    pub trials: usize,
    pub failures: usize,
}

/// Per (algorithm, SNR) statistics in first-appearance order. Failed
/// trials are excluded from the error moments and count as misses.
pub fn summarize(records: &[TrialRecord], threshold_mm: f64, acoustics: &Acoustics) -> Vec<SummaryRow> {
    let mut keys: Vec<(Algorithm, u64)> = Vec::new();
    for r in records {
        let k = (r.algorithm, r.snr_db.to_bits());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mm_per_sample = acoustics.metres_per_sample() * 1e3;
    keys.into_iter()
        .map(|(alg, bits)| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.algorithm == alg && r.snr_db.to_bits() == bits).collect();
            let ok: Vec<f64> = group.iter().filter(|r| !r.failed()).map(|r| r.error_mm).collect();
            let sq_mm: Vec<f64> = ok.iter().map(|e| e * e).collect();
            let sq_samples: Vec<f64> = ok.iter().map(|e| (e / mm_per_sample).powi(2)).collect();
            let mse_mm2 = exact_mean(&sq_mm);
            let within = group.iter().filter(|r| !r.failed() && r.error_mm < threshold_mm).count();
            SummaryRow {
                algorithm: alg,
                snr_db: f64::from_bits(bits),
                mse_samples2: exact_mean(&sq_samples),
                mse_mm2,
                rmse_mm: mse_mm2.sqrt(),
                p_within: within as f64 / group.len() as f64,
                trials: group.len(),
                failures: group.len() - ok.len(),
            }
        })
        .collect()
}

/// Fraction of records with error below each threshold (mm).
pub fn cumulative_error(records: &[TrialRecord], thresholds_mm: &[f64]) -> Vec<f64> {
    thresholds_mm
        .iter()
        .map(|t| records.iter().filter(|r| !r.failed() && r.error_mm < *t).count() as f64 / records.len().max(1) as f64)
        .collect()
}

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut s = format!("{SCHEMA_HEADER}\ntrial_id,snr_db,algorithm,true_tau,tau_hat,true_d_m,d_hat_m,error_mm,runtime_ns\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.trial_id,
            r.snr_db,
            r.algorithm.name(),
            r.true_tau,
            r.tau_hat,
            r.true_d_m,
            r.d_hat_m,
            r.error_mm,
            r.runtime_ns
        ));
    }
    s
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = format!("{SCHEMA_HEADER}\nalgorithm,snr_db,mse_samples2,mse_mm2,rmse_mm,p_within_halflambda\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.algorithm.name(),
            r.snr_db,
            r.mse_samples2,
            r.mse_mm2,
            r.rmse_mm,
            r.p_within
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(err_mm: f64) -> TrialRecord {
        TrialRecord {
            trial_id: 0,
            snr_db: 0.0,
            algorithm: Algorithm::DiffDzc,
            true_tau: 0.0,
            tau_hat: 0,
            true_d_m: 0.0,
            d_hat_m: err_mm / 1000.0,
            error_mm: err_mm,
            runtime_ns: 0,
        }
    }

    #[test]
    fn summary_basics() {
        let ac = Acoustics::default();
        let rows = summarize(&[rec(1.0), rec(1.0), rec(1.0)], 7.5, &ac);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].rmse_mm, 1.0);
        assert_eq!(rows[0].mse_mm2, 1.0);

        let mut v: Vec<TrialRecord> = (0..99).map(|k| rec(0.01 * k as f64)).collect();
        v.push(rec(7.5));
        assert_eq!(summarize(&v, 7.5, &ac)[0].p_within, 0.99);
    }

    #[test]
    fn seeds_differ() {
        let a = trial_seed(1, 0, 0);
        assert_ne!(a, trial_seed(1, 1, 0));
        assert_ne!(a, trial_seed(1, 0, 1));
        assert_ne!(a, trial_seed(2, 0, 0));
        assert_eq!(a, trial_seed(1, 0, 0));
    }

    #[test]
    fn noiseless_static_trial() {
        let cfg = ExperimentConfig { trials: 1, n: 63, tau: 20.0, ..Default::default() };
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].error_mm <= 0.2);
    }

    #[test]
    fn every_algorithm_runs_in_every_scenario() {
        for scenario in [Scenario::FixedDoppler, Scenario::ConstantVelocity, Scenario::VelocityProfile] {
            let cfg = ExperimentConfig {
                scenario,
                n: 31,
                m: 1,
                tau: 9.0,
                velocity: 0.2,
                trials: 2,
                snr_grid: vec![30.0],
                algorithms: Algorithm::ALL.to_vec(),
                ml_nu_halfwidth: Some(2.0 / 124.0),
                candidate_window: Some(20),
                ..Default::default()
            };
            let r = run_experiment(&cfg).unwrap();
            assert_eq!(r.len(), 10);
            for x in &r {
                assert!(!x.failed(), "{scenario:?} {:?}", x.algorithm);
                assert!(x.error_mm < 3.0, "{scenario:?} {:?} {}", x.algorithm, x.error_mm);
            }
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(run_experiment(&ExperimentConfig { n: 4, m: 2, ..Default::default() }).is_err());
        assert!(run_experiment(&ExperimentConfig { trials: 0, ..Default::default() }).is_err());
        assert!(run_experiment(&ExperimentConfig { snr_grid: vec![], ..Default::default() }).is_err());
    }
}
