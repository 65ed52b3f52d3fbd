//! Range estimators: maximum-likelihood grid search ([`ml`]) and the
//! reduced-complexity differential pipeline ([`pipeline`], [`refine`]).

use std::collections::BTreeMap;

pub mod ml;
pub mod pipeline;
pub mod refine;

pub use ml::{ambiguity_map, ml_estimate, ml_metric, MlSearchConfig};
pub use pipeline::{
    compensate_doppler, estimate_doppler, estimate_doppler_per_step, initial_tof_window,
    reduced_complexity_pipeline, Pipeline, PipelineConfig,
};
pub use refine::{min_variance_search, phase_refine, CrossSpectrum, Fit, RefineMode};

/// Sampling and propagation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Acoustics {
    pub fs: f64,
    pub fc: f64,
    /// Speed of sound, m/s.
    pub c: f64,
}

impl Default for Acoustics {
    fn default() -> Self {
        Acoustics { fs: crate::DEFAULT_FS, fc: crate::DEFAULT_FC, c: crate::DEFAULT_C }
    }
}

impl Acoustics {
    /// Metres per sample of delay.
    pub fn metres_per_sample(&self) -> f64 {
        self.c / self.fs
    }

    /// Carrier offset (cycles/sample) implied by a relative Doppler.
    pub fn nu_from_delta(&self, delta: f64) -> f64 {
        self.fc * delta / self.fs
    }

    pub fn delta_from_nu(&self, nu: f64) -> f64 {
        nu * self.fs / self.fc
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.fs > 0.0 && self.c > 0.0 && self.fc > 0.0) {
            return Err(crate::Error::OutOfRange("fs, fc and c must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeEstimate {
    pub tau_hat: i64,
    /// Cycles per sample.
    pub nu_hat: f64,
    /// Metres.
    pub d_hat: f64,
    pub refinement_mm: f64,
    pub metric: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl RangeEstimate {
    pub fn new(tau_hat: i64, refinement_mm: f64, metric: f64, ac: &Acoustics) -> Self {
        RangeEstimate {
            tau_hat,
            nu_hat: 0.0,
            d_hat: tau_hat as f64 * ac.metres_per_sample() + refinement_mm * 1e-3,
            refinement_mm,
            metric,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn diag(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }
}
