//! Sub-sample phase refinement and the minimum-refinement-variance search.
//!
//! With `C(ω) = Z(ω)·conj(Y(ω))` for template `z` and received `y`, a
//! received signal delayed by `d` samples relative to the template gives
//! `arg C(ω) = ω·d`. Integer candidates are scored by how consistently
//! the valid bins agree on a single `d`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::pipeline::PipelineConfig;
use crate::error::{Error, Result};
use crate::fft::{bin_omega, fft};
use crate::sequences::SequenceSpec;

/// How per-bin phases are combined into one delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineMode {
    /// Least-squares phase-slope fit; bins are implicitly weighted by ω².
    #[default]
    Weighted,
    /// Plain average of per-bin delays `ψ_m / ω_m`.
    Uniform,
}

impl std::str::FromStr for RefineMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(RefineMode::Weighted),
            "uniform" => Ok(RefineMode::Uniform),
            other => Err(Error::Config(format!("unknown refine mode '{other}'"))),
        }
    }
}

/// Wrap to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    /// Fractional delay in samples.
    pub delay: f64,
    pub variance: f64,
}

/// Cross-spectrum restricted to the valid bins.
#[derive(Debug, Clone)]
pub struct CrossSpectrum {
    pub bins: Vec<usize>,
    pub omega: Vec<f64>,
    pub cross: Vec<Complex64>,
    /// Transform length the bins index into.
    pub n: usize,
}

impl CrossSpectrum {
    /// Bins whose template magnitude reaches `ratio` of the maximum, never DC or Nyquist.
    pub fn valid_bins(z_spec: &[Complex64], ratio: f64) -> Vec<usize> {
        let n = z_spec.len();
        let peak = z_spec.iter().map(|v| v.norm()).fold(0.0, f64::max);
        (1..n)
            .filter(|&m| 2 * m != n && z_spec[m].norm() >= ratio * peak && peak > 0.0)
            .collect()
    }

    pub fn new(z_spec: &[Complex64], y_spec: &[Complex64], bins: Vec<usize>) -> Self {
        let n = z_spec.len();
        let omega = bins.iter().map(|&m| bin_omega(m, n)).collect();
        let cross = bins.iter().map(|&m| z_spec[m] * y_spec[m].conj()).collect();
        CrossSpectrum { bins, omega, cross, n }
    }

    /// Adds another cross-spectrum over the same bins.
    pub fn accumulate(&mut self, z_spec: &[Complex64], y_spec: &[Complex64]) {
        for (c, &m) in self.cross.iter_mut().zip(&self.bins) {
            *c += z_spec[m] * y_spec[m].conj();
        }
    }

    /// Refinement for the template shifted by `offset` whole samples.
    pub fn fit(&self, offset: i64, mode: RefineMode) -> Fit {
        self.fit_with(&roots_of_unity(self.n), offset, mode)
    }

    /// `roots[k] = e^{-2πik/n}`; the ramp `e^{-iωo}` is then a table lookup.
    fn fit_with(&self, roots: &[Complex64], offset: i64, mode: RefineMode) -> Fit {
        let n = self.n as i64;
        let rot: Vec<Complex64> = self
            .cross
            .iter()
            .zip(&self.bins)
            .map(|(c, &m)| c * roots[(m as i64 * offset).rem_euclid(n) as usize])
            .collect();
        let common = rot.iter().sum::<Complex64>().arg();
        let psi: Vec<f64> = rot.iter().map(|c| wrap_phase(c.arg() - common)).collect();
        let count = psi.len() as f64;
        let (slope, intercept) = if psi.len() < 2 {
            let sw2: f64 = self.omega.iter().map(|w| w * w).sum();
            (self.omega.iter().zip(&psi).map(|(w, p)| w * p).sum::<f64>() / sw2, 0.0)
        } else {
            let mw = self.omega.iter().sum::<f64>() / count;
            let mp = psi.iter().sum::<f64>() / count;
            let sxy: f64 = self.omega.iter().zip(&psi).map(|(w, p)| (w - mw) * (p - mp)).sum();
            let sxx: f64 = self.omega.iter().map(|w| (w - mw) * (w - mw)).sum();
            let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            (a, mp - a * mw)
        };
        match mode {
            RefineMode::Weighted => {
                let v = self
                    .omega
                    .iter()
                    .zip(&psi)
                    .map(|(w, p)| (p - slope * w - intercept).powi(2))
                    .sum::<f64>()
                    / count;
                Fit { delay: slope, variance: v }
            }
            RefineMode::Uniform => {
                let per: Vec<f64> = self.omega.iter().zip(&psi).map(|(w, p)| (p - intercept) / w).collect();
                let mean = per.iter().sum::<f64>() / count;
                let v = per.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / count;
                Fit { delay: mean, variance: v }
            }
        }
    }

    /// Minimum-variance candidate among `window` offsets centred on zero.
    /// Ties go to the smallest |offset|, then the more negative offset.
    pub fn search(&self, window: usize, mode: RefineMode) -> (i64, Fit) {
        let lo = -((window / 2) as i64);
        let mut offsets: Vec<i64> = (lo..lo + window as i64).collect();
        offsets.sort_by_key(|o| (o.abs(), *o));
        let roots = roots_of_unity(self.n);
        let mut best = (0, Fit { delay: 0.0, variance: f64::INFINITY });
        for o in offsets {
            let f = self.fit_with(&roots, o, mode);
            if f.variance < best.1.variance {
                best = (o, f);
            }
        }
        best
    }
}

fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::cis(-2.0 * PI * k as f64 / n as f64)).collect()
}

fn block_template(spec: &SequenceSpec, tau: i64) -> Vec<Complex64> {
    let n = spec.n as i64;
    let code = spec.symbols(0, spec.n);
    (0..n).map(|k| code[(k - tau).rem_euclid(n) as usize]).collect()
}

fn block_cross(received: &[Complex64], spec: &SequenceSpec, tau: i64, cfg: &PipelineConfig) -> Result<CrossSpectrum> {
    spec.validate()?;
    if received.len() != spec.n {
        return Err(Error::LengthMismatch { expected: spec.n, got: received.len() });
    }
    let z = fft(&block_template(spec, tau));
    let y = fft(received);
    let bins = CrossSpectrum::valid_bins(&z, cfg.valid_bin_ratio);
    if bins.is_empty() {
        return Err(Error::NoValidBins);
    }
    Ok(CrossSpectrum::new(&z, &y, bins))
}

/// Sub-sample correction, in metres, for a received block whose integer
/// delay relative to the circular code is `tau_hat`.
pub fn phase_refine(received_comp: &[Complex64], spec: &SequenceSpec, tau_hat: i64, cfg: &PipelineConfig) -> Result<f64> {
    let cs = block_cross(received_comp, spec, tau_hat, cfg)?;
    Ok(cs.fit(0, cfg.refine_mode).delay * cfg.acoustics.metres_per_sample())
}

/// Corrected integer delay (in [0, N)) and its refinement in metres.
pub fn min_variance_search(
    received_comp: &[Complex64],
    spec: &SequenceSpec,
    tau_hat: i64,
    cfg: &PipelineConfig,
) -> Result<(i64, f64)> {
    if cfg.candidate_window == 0 || cfg.candidate_window > spec.n {
        return Err(Error::OutOfRange(format!(
            "candidate window {} not in [1, N={}]",
            cfg.candidate_window, spec.n
        )));
    }
    let cs = block_cross(received_comp, spec, tau_hat, cfg)?;
    let (o, fit) = cs.search(cfg.candidate_window, cfg.refine_mode);
    let tau = (tau_hat + o).rem_euclid(spec.n as i64);
    Ok((tau, fit.delay * cfg.acoustics.metres_per_sample()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel_fixed, ChannelSpec};

    fn cfg() -> PipelineConfig {
        PipelineConfig { candidate_window: 20, ..PipelineConfig::default() }
    }

    fn received(spec: &SequenceSpec, tau: f64) -> Vec<Complex64> {
        let code = spec.symbols(0, spec.n);
        apply_channel_fixed(&code, &ChannelSpec { tau_samples: tau, theta: 0.7, ..Default::default() }).unwrap()
    }

    #[test]
    fn wrap_convention() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_fraction_gives_zero() {
        let spec = SequenceSpec::dzc(127, 1).unwrap();
        let y = received(&spec, 40.0);
        for mode in [RefineMode::Weighted, RefineMode::Uniform] {
            let c = PipelineConfig { refine_mode: mode, ..cfg() };
            assert!(phase_refine(&y, &spec, 40, &c).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn fractional_delays() {
        let spec = SequenceSpec::dzc(127, 1).unwrap();
        let mps = cfg().acoustics.metres_per_sample();
        for frac in [-0.5, -0.25, 0.25, 0.5] {
            let y = received(&spec, 40.0 + frac);
            for mode in [RefineMode::Weighted, RefineMode::Uniform] {
                let c = PipelineConfig { refine_mode: mode, ..cfg() };
                let d = phase_refine(&y, &spec, 40, &c).unwrap();
                assert!((d - frac * mps).abs() <= 0.02 * mps, "frac={frac} mode={mode:?} d={d}");
            }
        }
    }

    #[test]
    fn search_recovers_injected_error() {
        let spec = SequenceSpec::dzc(127, 1).unwrap();
        let y = received(&spec, 40.3);
        // τ and τ+1 with a one-sample-smaller fraction describe the same range.
        for err in [-6i64, 0, 4, 9] {
            let (tau, d) = min_variance_search(&y, &spec, 40 + err, &cfg()).unwrap();
            let total = tau as f64 + d / cfg().acoustics.metres_per_sample();
            assert!((39..=41).contains(&tau), "err={err} tau={tau}");
            assert!((total - 40.3).abs() < 1e-6, "err={err} total={total}");
        }
    }

    #[test]
    fn degenerate_spectrum_errors() {
        let spec = SequenceSpec::dzc(16, 1).unwrap();
        let c = PipelineConfig { valid_bin_ratio: 1.0, ..cfg() };
        // Still has the max bin unless it is DC or Nyquist; an all-zero window has none.
        let zeros = vec![Complex64::new(0.0, 0.0); 16];
        assert!(phase_refine(&zeros, &spec, 0, &c).is_ok());
        assert!(min_variance_search(&zeros, &spec, 0, &PipelineConfig { candidate_window: 17, ..c }).is_err());
    }
}
