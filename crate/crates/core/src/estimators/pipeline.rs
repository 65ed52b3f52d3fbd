//! Reduced-complexity ranging over a repeated DZC transmission.
//!
//! Each window goes through: Doppler compensation with the current
//! estimate, differential correlation for the integer delay, a
//! minimum-variance search over integer candidates, and phase
//! refinement. The Doppler estimate is refreshed once per code length
//! from the slope of the refined ranges.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;

use super::refine::{CrossSpectrum, RefineMode};
use super::{Acoustics, RangeEstimate};
use crate::correlation::{diff_sliding_corr_stream, stream_products, CorrelationResult};
use crate::error::{Error, Result};
use crate::fft::{fft, ifft};
use crate::interp::SincKernel;
use crate::sequences::SequenceSpec;
use crate::tolerances::MAX_ABS_DELTA;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Spacing N_s of the range estimates feeding Doppler estimation; divides N.
    pub segment_length: usize,
    /// Hop between processed windows; divides `segment_length`.
    pub window_step: usize,
    pub candidate_window: usize,
    pub valid_bin_ratio: f64,
    pub acoustics: Acoustics,
    pub refine_mode: RefineMode,
    /// Number of consecutive code lengths combined coherently per estimate.
    pub integration_periods: usize,
    /// Segments pooled by each Doppler update.
    pub doppler_segments: usize,
    /// Relative Doppler assumed before the first update.
    pub initial_delta: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            segment_length: 1,
            window_step: 1,
            candidate_window: 200,
            valid_bin_ratio: 0.5,
            acoustics: Acoustics::default(),
            refine_mode: RefineMode::Weighted,
            integration_periods: 1,
            doppler_segments: 1,
            initial_delta: 0.0,
        }
    }
}

/// Largest divisor of `n` not above `n / 4`, or 1.
pub fn default_segment_length(n: usize) -> usize {
    (1..=n / 4).rev().find(|d| n % d == 0).unwrap_or(1)
}

/// 200 candidates, capped below `n`.
pub fn default_candidate_window(n: usize) -> usize {
    200.min(n.saturating_sub(1)).max(1)
}

impl PipelineConfig {
    /// Defaults adapted to code length `n`.
    pub fn for_n(n: usize) -> Self {
        PipelineConfig {
            segment_length: default_segment_length(n),
            candidate_window: default_candidate_window(n),
            ..Default::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.acoustics.validate()?;
        if self.segment_length == 0 || n % self.segment_length != 0 {
            return Err(Error::Config(format!("segment_length {} must divide N={n}", self.segment_length)));
        }
        if self.window_step == 0 || self.segment_length % self.window_step != 0 {
            return Err(Error::Config(format!(
                "window_step {} must divide segment_length {}",
                self.window_step, self.segment_length
            )));
        }
        if self.candidate_window == 0 || self.candidate_window >= n {
            return Err(Error::Config(format!("candidate_window {} must be in [1, N={n})", self.candidate_window)));
        }
        if !(self.valid_bin_ratio > 0.0 && self.valid_bin_ratio <= 1.0) {
            return Err(Error::Config(format!("valid_bin_ratio {} not in (0, 1]", self.valid_bin_ratio)));
        }
        if self.integration_periods == 0 || self.doppler_segments == 0 {
            return Err(Error::Config("integration_periods and doppler_segments must be >= 1".into()));
        }
        if !(self.initial_delta.abs() < MAX_ABS_DELTA) {
            return Err(Error::Config(format!("initial_delta {} outside guard band", self.initial_delta)));
        }
        Ok(())
    }
}

/// Conjugated-lag products of the code for the window starting at `start`.
fn template_products(spec: &SequenceSpec, start: i64) -> Vec<Complex64> {
    let a = spec.symbols(start, spec.n + 1);
    (0..spec.n).map(|k| a[k].conj() * a[k + 1]).collect()
}

/// Differential correlation of the raw window `[i, i+N)` against the
/// template shifted by `i`. Needs one sample past the window.
pub fn initial_tof_window(
    received_stream: &[Complex64],
    spec: &SequenceSpec,
    window_index: usize,
    cfg: &PipelineConfig,
) -> Result<RangeEstimate> {
    spec.validate()?;
    let s = template_products(spec, window_index as i64);
    let r = diff_sliding_corr_stream(&s, received_stream, window_index, 1)?;
    let mut est = RangeEstimate::new(r.peak_index as i64, 0.0, r.peak_magnitude, &cfg.acoustics);
    est.diagnostics.insert("window_start".into(), window_index as f64);
    Ok(est)
}

/// Relative Doppler from a uniformly spaced series of `(sample index, range m)`.
///
/// Uses the end-point difference. A shrinking range is an approaching
/// target, which maps to a positive Δ̂ (signal compression).
pub fn estimate_doppler(range_series: &[(f64, f64)], cfg: &PipelineConfig) -> Result<f64> {
    check_series(range_series)?;
    let (first, last) = (range_series[0], range_series[range_series.len() - 1]);
    let dt = (last.0 - first.0) / cfg.acoustics.fs;
    Ok(-(last.1 - first.1) / dt / cfg.acoustics.c)
}

/// Theil-Sen variant: median of all pairwise slopes. Tolerates a minority
/// of gross range errors that would swing the end-point difference.
pub fn estimate_doppler_robust(range_series: &[(f64, f64)], cfg: &PipelineConfig) -> Result<f64> {
    check_series(range_series)?;
    let mut slopes = Vec::with_capacity(range_series.len() * (range_series.len() - 1) / 2);
    for (a, p) in range_series.iter().enumerate() {
        for q in &range_series[a + 1..] {
            slopes.push((q.1 - p.1) / ((q.0 - p.0) / cfg.acoustics.fs));
        }
    }
    slopes.sort_by(f64::total_cmp);
    let h = slopes.len() / 2;
    let v = if slopes.len() % 2 == 1 { slopes[h] } else { 0.5 * (slopes[h - 1] + slopes[h]) };
    Ok(-v / cfg.acoustics.c)
}

/// Mean of step-wise velocities; agrees with [`estimate_doppler`] on uniform series.
pub fn estimate_doppler_per_step(range_series: &[(f64, f64)], cfg: &PipelineConfig) -> Result<f64> {
    check_series(range_series)?;
    let v: f64 = range_series
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / ((w[1].0 - w[0].0) / cfg.acoustics.fs))
        .sum::<f64>()
        / (range_series.len() - 1) as f64;
    Ok(-v / cfg.acoustics.c)
}

fn check_series(series: &[(f64, f64)]) -> Result<()> {
    if series.len() < 2 {
        return Err(Error::TooShort { needed: 2, have: series.len() });
    }
    let step = series[1].0 - series[0].0;
    if !(step > 0.0) {
        return Err(Error::OutOfRange("series indices must increase".into()));
    }
    let tol = 1e-9 * (series[series.len() - 1].0 - series[0].0).abs().max(1.0);
    if series.windows(2).any(|w| ((w[1].0 - w[0].0) - step).abs() > tol) {
        return Err(Error::OutOfRange("series indices are not uniformly spaced".into()));
    }
    Ok(())
}

/// Undo a time scale of `1+Δ̂` and the matching carrier offset, about the
/// stream position `center`. Produces `len` samples starting at stream index
/// `start`, read `advance` samples late (a positive advance shortens the delay).
fn compensate_about(
    stream: &[Complex64],
    center: f64,
    start: i64,
    len: usize,
    delta: f64,
    advance: f64,
    ac: &Acoustics,
) -> Vec<Complex64> {
    let kernel = SincKernel::standard();
    let scale = 1.0 + delta;
    let rot = 2.0 * PI * ac.nu_from_delta(delta) / scale;
    (0..len)
        .map(|q| {
            let off = (start + q as i64) as f64 - center;
            let v = kernel.eval_zero_padded(stream, center + off / scale + advance);
            if delta == 0.0 {
                v
            } else {
                v * Complex64::cis(-rot * off)
            }
        })
        .collect()
}

/// Doppler compensation of a segment about its centre; length is preserved.
pub fn compensate_doppler(segment: &[Complex64], delta_hat: f64, ac: &Acoustics) -> Result<Vec<Complex64>> {
    if !(delta_hat.abs() < MAX_ABS_DELTA) {
        return Err(Error::OutOfRange(format!("delta_hat {delta_hat} outside guard band")));
    }
    let center = (segment.len() as f64 - 1.0) / 2.0;
    Ok(compensate_about(segment, center, 0, segment.len(), delta_hat, 0.0, ac))
}

/// Stateful driver over one stream: holds the configuration, the current
/// Doppler estimate and the range history feeding it.
#[derive(Debug, Clone)]
pub struct Pipeline {
    spec: SequenceSpec,
    cfg: PipelineConfig,
    delta_hat: f64,
    updated: bool,
    series: Vec<(f64, f64)>,
    fresh_points: usize,
    cache: TemplateCache,
}

/// Spectra of code windows keyed by start modulo the code period.
#[derive(Debug, Clone, Default)]
struct TemplateCache {
    products: HashMap<i64, Vec<Complex64>>,
    symbols: HashMap<i64, Vec<Complex64>>,
}

const CACHE_LIMIT: usize = 4096;

impl TemplateCache {
    fn get(map: &mut HashMap<i64, Vec<Complex64>>, key: i64, make: impl FnOnce() -> Vec<Complex64>) -> &[Complex64] {
        if map.len() >= CACHE_LIMIT && !map.contains_key(&key) {
            map.clear();
        }
        map.entry(key).or_insert_with(make)
    }
}

impl Pipeline {
    pub fn new(spec: SequenceSpec, cfg: PipelineConfig) -> Result<Self> {
        spec.validate()?;
        cfg.validate(spec.n)?;
        Ok(Pipeline {
            spec,
            delta_hat: cfg.initial_delta,
            cfg,
            updated: false,
            series: Vec::new(),
            fresh_points: 0,
            cache: TemplateCache::default(),
        })
    }

    pub fn delta_hat(&self) -> f64 {
        self.delta_hat
    }

    fn span(&self) -> usize {
        self.cfg.integration_periods * self.spec.n + 1
    }

    fn guard(&self) -> usize {
        SincKernel::standard().half_width() + 4 + (0.005 * self.span() as f64).ceil() as usize
    }

    /// First window start with full history and guard.
    pub fn first_window(&self) -> usize {
        (self.cfg.integration_periods - 1) * self.spec.n + self.guard()
    }

    /// Last window start that fits a stream of `len` samples.
    pub fn last_window(&self, len: usize) -> Option<usize> {
        let need = self.spec.n + 1 + self.guard();
        let last = len.checked_sub(need)?;
        let first = self.first_window();
        (last >= first).then(|| first + (last - first) / self.cfg.window_step * self.cfg.window_step)
    }

    /// Stream length that makes `windows` windows available.
    pub fn stream_len_for(&self, windows: usize) -> usize {
        self.first_window() + (windows.max(1) - 1) * self.cfg.window_step + self.spec.n + 1 + self.guard()
    }

    /// Processes the window starting at `i`. Windows must be fed in
    /// increasing order with the configured step for Doppler tracking.
    pub fn process_window(&mut self, stream: &[Complex64], i: usize) -> Result<RangeEstimate> {
        let n = self.spec.n;
        let periods = self.cfg.integration_periods;
        if i + n + 1 > stream.len() {
            return Err(Error::TooShort { needed: i + n + 1, have: stream.len() });
        }
        if i < (periods - 1) * n {
            return Err(Error::OutOfRange(format!("window {i} lacks {periods} periods of history")));
        }
        let ac = self.cfg.acoustics;
        // Reference instant: middle of the integrated span, so a residual
        // Doppler error misaligns the periods symmetrically.
        let span_start = (i - (periods - 1) * n) as i64;
        let center = span_start as f64 + ((periods * n) as f64 - 1.0) / 2.0;
        let comp = compensate_about(stream, center, span_start, self.span(), self.delta_hat, 0.0, &ac);
        // A one-sample-per-symbol code loses most of its differential
        // correlation near half-sample delays, so a second branch read half
        // a sample late covers them; the stronger peak wins.
        let half = compensate_about(stream, center, span_start, self.span(), self.delta_hat, 0.5, &ac);
        let direct = self.integrated_corr(&comp, i, span_start as usize);
        let shifted = self.integrated_corr(&half, i, span_start as usize);
        let half_branch = shifted.peak_magnitude > direct.peak_magnitude;
        let corr = if half_branch {
            // True delay lies within a quarter sample of peak + 1/2.
            let t = shifted.peak_index;
            let next = (t + 1) % n;
            let pick = if direct.values[next].norm() > direct.values[t].norm() { next } else { t };
            CorrelationResult { peak_index: pick, peak_magnitude: shifted.peak_magnitude, values: shifted.values }
        } else {
            direct
        };
        let tau_corr = corr.peak_index as i64;

        let windows: Vec<Vec<Complex64>> = (0..periods)
            .map(|j| {
                let local = i - j * n - span_start as usize;
                fft(&comp[local..local + n])
            })
            .collect();
        let mut est;
        let mut refine_failed = 0.0;
        let mut offset = 0;
        let mut variance = f64::NAN;
        let (cw, mode) = (self.cfg.candidate_window, self.cfg.refine_mode);
        match self.cross_spectrum(&windows, i, tau_corr) {
            Some(cs) => {
                let (o, _) = cs.search(cw, mode);
                offset = o;
                let tau = (tau_corr + o).rem_euclid(n as i64);
                // Re-evaluate against the exact template at the winning delay.
                let fit = self.cross_spectrum(&windows, i, tau).expect("valid bins exist").fit(0, mode);
                variance = fit.variance;
                est = RangeEstimate::new(tau, fit.delay * ac.metres_per_sample() * 1e3, corr.peak_magnitude, &ac);
            }
            None => {
                refine_failed = 1.0;
                est = RangeEstimate::new(tau_corr, 0.0, corr.peak_magnitude, &ac);
            }
        }
        est.nu_hat = ac.nu_from_delta(self.delta_hat);
        let single = initial_tof_window(stream, &self.spec, i, &self.cfg)?;
        let d = &mut est.diagnostics;
        d.insert("window_start".into(), i as f64);
        d.insert("reference_sample".into(), center);
        d.insert("tau_corr".into(), tau_corr as f64);
        d.insert("half_sample_branch".into(), if half_branch { 1.0 } else { 0.0 });
        d.insert("tau_single_window".into(), single.tau_hat as f64);
        d.insert("candidate_offset".into(), offset as f64);
        d.insert("refine_variance".into(), variance);
        d.insert("refine_failed".into(), refine_failed);
        d.insert("delta_hat".into(), self.delta_hat);
        d.insert("provisional".into(), if self.updated { 0.0 } else { 1.0 });

        self.track(i, center, est.d_hat)?;
        Ok(est)
    }

    /// Coherent differential correlation over the integrated periods.
    fn integrated_corr(&mut self, comp: &[Complex64], i: usize, span_start: usize) -> CorrelationResult {
        let (n, period) = (self.spec.n, self.spec.period() as i64);
        let mut r_sum = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..self.cfg.integration_periods {
            let start = i - j * n;
            let spec = self.spec;
            let sf = TemplateCache::get(&mut self.cache.products, (start as i64).rem_euclid(period), || {
                fft(&template_products(&spec, start as i64).iter().map(|v| v.conj()).collect::<Vec<_>>())
            });
            let pf = fft(&stream_products(comp, start - span_start, n, 1));
            let prod: Vec<Complex64> = sf.iter().zip(&pf).map(|(a, b)| a.conj() * b).collect();
            for (acc, v) in r_sum.iter_mut().zip(ifft(&prod)) {
                *acc += v;
            }
        }
        CorrelationResult::from_values(r_sum)
    }

    /// Cross-spectrum of the period windows against the code delayed by `tau`.
    fn cross_spectrum(&mut self, windows: &[Vec<Complex64>], i: usize, tau: i64) -> Option<CrossSpectrum> {
        let (n, period) = (self.spec.n, self.spec.period() as i64);
        let mut cs: Option<CrossSpectrum> = None;
        for (j, y) in windows.iter().enumerate() {
            let start = (i - j * n) as i64 - tau;
            let spec = self.spec;
            let z = TemplateCache::get(&mut self.cache.symbols, start.rem_euclid(period), || fft(&spec.symbols(start, n)));
            match cs.as_mut() {
                None => {
                    let bins = CrossSpectrum::valid_bins(z, self.cfg.valid_bin_ratio);
                    if bins.is_empty() {
                        return None;
                    }
                    cs = Some(CrossSpectrum::new(z, y, bins));
                }
                Some(c) => c.accumulate(z, y),
            }
        }
        cs
    }

    fn track(&mut self, i: usize, center: f64, d_hat: f64) -> Result<()> {
        if (i - self.first_window()) % self.cfg.segment_length != 0 {
            return Ok(());
        }
        self.series.push((center, d_hat));
        self.fresh_points += 1;
        let per_segment = self.spec.n / self.cfg.segment_length;
        let keep = self.cfg.doppler_segments * per_segment + 1;
        // A partly filled pool is too short a baseline; keep the prior until it fills.
        if self.fresh_points >= per_segment && self.series.len() >= keep {
            let tail = &self.series[self.series.len() - keep..];
            let delta = estimate_doppler_robust(tail, &self.cfg)?;
            if delta.abs() < MAX_ABS_DELTA {
                self.delta_hat = delta;
                self.updated = true;
            }
            self.fresh_points = 0;
            let drop = self.series.len() - keep;
            self.series.drain(..drop);
        }
        Ok(())
    }

    /// All windows of the stream, in order.
    pub fn run(&mut self, stream: &[Complex64]) -> Result<Vec<RangeEstimate>> {
        let Some(last) = self.last_window(stream.len()) else {
            return Err(Error::TooShort { needed: self.stream_len_for(1), have: stream.len() });
        };
        (self.first_window()..=last)
            .step_by(self.cfg.window_step)
            .map(|i| self.process_window(stream, i))
            .collect()
    }
}

pub fn reduced_complexity_pipeline(
    stream: &[Complex64],
    spec: &SequenceSpec,
    cfg: &PipelineConfig,
) -> Result<Vec<RangeEstimate>> {
    Pipeline::new(*spec, cfg.clone())?.run(stream)
}
