//! Maximum-likelihood delay/Doppler grid search and ambiguity maps.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{Acoustics, RangeEstimate};
use crate::channel::{apply_channel_fixed, ChannelSpec};
use crate::correlation::circular_xcorr;
use crate::error::{Error, Result};
use crate::interp::SincKernel;
use crate::sequences::SequenceSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct MlSearchConfig {
    pub tau_grid: Vec<usize>,
    /// Centre of the Doppler window, cycles/sample.
    pub nu_center: f64,
    pub nu_halfwidth: f64,
    pub nu_step: f64,
    /// Tie the time scale to the carrier offset (Δ̃ = ν̃·fs/fc) instead of Δ̃ = 0.
    pub delta_from_nu: bool,
    pub acoustics: Acoustics,
}

impl MlSearchConfig {
    /// Full delay grid, window of width M centred at zero, step 1/(4N), no time scaling.
    pub fn for_spec(spec: &SequenceSpec) -> Self {
        MlSearchConfig {
            tau_grid: (0..spec.n).collect(),
            nu_center: 0.0,
            nu_halfwidth: spec.m as f64 / 2.0,
            nu_step: 1.0 / (4.0 * spec.n as f64),
            delta_from_nu: false,
            acoustics: Acoustics::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu_step > 0.0) || !(self.nu_halfwidth > 0.0) {
            return Err(Error::OutOfRange("nu_step and nu_halfwidth must be positive".into()));
        }
        if self.tau_grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(())
    }

    /// Half-open window `[centre − halfwidth, centre + halfwidth)` on the step lattice.
    pub fn nu_grid(&self) -> Vec<f64> {
        let j = (self.nu_halfwidth / self.nu_step).round() as i64;
        (-j..j).map(|i| self.nu_center + i as f64 * self.nu_step).collect()
    }
}

/// Template `x((1+Δ)(k−τ))` over one block, `x` periodic with the block length.
fn template(code: &[Complex64], tau: f64, delta: f64) -> Vec<Complex64> {
    let n = code.len();
    if delta == 0.0 && tau.fract() == 0.0 {
        let t = tau as i64;
        return (0..n as i64).map(|k| code[(k - t).rem_euclid(n as i64) as usize]).collect();
    }
    let kernel = SincKernel::standard();
    (0..n).map(|k| kernel.eval_periodic(code, (1.0 + delta) * (k as f64 - tau))).collect()
}

fn rotated(received: &[Complex64], nu: f64) -> Vec<Complex64> {
    received
        .iter()
        .enumerate()
        .map(|(k, y)| y * Complex64::cis(-2.0 * PI * nu * k as f64))
        .collect()
}

/// `|Σ_k y[k]·conj(x((1+Δ̃)(k−τ̃)))·e^{−i2πν̃k}|`.
pub fn ml_metric(received: &[Complex64], spec: &SequenceSpec, tau: i64, nu: f64, delta: f64) -> Result<f64> {
    spec.validate()?;
    if received.len() != spec.n {
        return Err(Error::LengthMismatch { expected: spec.n, got: received.len() });
    }
    if !nu.is_finite() || !(delta.abs() < crate::tolerances::MAX_ABS_DELTA) {
        return Err(Error::OutOfRange(format!("invalid grid point nu={nu} delta={delta}")));
    }
    let code = spec.symbols(0, spec.n);
    let t = template(&code, tau as f64, delta);
    let y = rotated(received, nu);
    Ok(y.iter().zip(&t).map(|(a, b)| a * b.conj()).sum::<Complex64>().norm())
}

/// Metric over the whole `tau_grid × nu_grid`, row-major (τ̃ outer).
fn metric_grid(received: &[Complex64], spec: &SequenceSpec, cfg: &MlSearchConfig, nus: &[f64]) -> Result<Vec<f64>> {
    let code = spec.symbols(0, spec.n);
    let n = spec.n;
    let mut out = vec![0.0; cfg.tau_grid.len() * nus.len()];
    for (jn, &nu) in nus.iter().enumerate() {
        let y = rotated(received, nu);
        let delta = if cfg.delta_from_nu { cfg.acoustics.delta_from_nu(nu) } else { 0.0 };
        if delta == 0.0 {
            // All delays at once: Σ_k y'[k]·conj(x[k−τ̃]) is a circular correlation.
            let r = circular_xcorr(&code, &y)?;
            for (it, &tau) in cfg.tau_grid.iter().enumerate() {
                out[it * nus.len() + jn] = r.values[tau % n].norm();
            }
        } else {
            if !(delta.abs() < crate::tolerances::MAX_ABS_DELTA) {
                return Err(Error::OutOfRange(format!("coupled delta {delta} outside guard band")));
            }
            for (it, &tau) in cfg.tau_grid.iter().enumerate() {
                let t = template(&code, tau as f64, delta);
                out[it * nus.len() + jn] = y.iter().zip(&t).map(|(a, b)| a * b.conj()).sum::<Complex64>().norm();
            }
        }
    }
    Ok(out)
}

/// Exhaustive grid argmax. Ties resolve to the smallest τ̃, then the smallest ν̃.
pub fn ml_estimate(received: &[Complex64], spec: &SequenceSpec, cfg: &MlSearchConfig) -> Result<RangeEstimate> {
    spec.validate()?;
    cfg.validate()?;
    if received.len() != spec.n {
        return Err(Error::LengthMismatch { expected: spec.n, got: received.len() });
    }
    if cfg.tau_grid.iter().any(|&t| t >= spec.n) {
        return Err(Error::OutOfRange("tau grid exceeds [0, N)".into()));
    }
    let nus = cfg.nu_grid();
    if nus.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let grid = metric_grid(received, spec, cfg, &nus)?;
    let mut best = (0usize, 0usize, f64::NEG_INFINITY);
    let mut order: Vec<usize> = (0..cfg.tau_grid.len()).collect();
    order.sort_by_key(|&i| cfg.tau_grid[i]);
    for &it in &order {
        for jn in 0..nus.len() {
            let m = grid[it * nus.len() + jn];
            if m > best.2 {
                best = (it, jn, m);
            }
        }
    }
    let (it, jn, metric) = best;
    let mut est = RangeEstimate::new(cfg.tau_grid[it] as i64, 0.0, metric, &cfg.acoustics);
    est.nu_hat = nus[jn];
    Ok(est)
}

/// Noiseless metric map for a block delayed by `true_tau` with carrier offset `true_nu`.
/// Rows follow `tau_grid`, columns follow `nu_grid`.
pub fn ambiguity_map(
    spec: &SequenceSpec,
    true_tau: usize,
    true_nu: f64,
    tau_grid: &[usize],
    nu_grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let code = spec.symbols(0, spec.n);
    let received = apply_channel_fixed(
        &code,
        &ChannelSpec { tau_samples: true_tau as f64, nu: true_nu, ..Default::default() },
    )?;
    let cfg = MlSearchConfig { tau_grid: tau_grid.to_vec(), ..MlSearchConfig::for_spec(spec) };
    if tau_grid.iter().any(|&t| t >= spec.n) {
        return Err(Error::OutOfRange("tau grid exceeds [0, N)".into()));
    }
    if nu_grid.is_empty() {
        return Ok(vec![Vec::new(); tau_grid.len()]);
    }
    let flat = metric_grid(&received, spec, &cfg, nu_grid)?;
    Ok(flat.chunks(nu_grid.len()).map(|c| c.to_vec()).collect())
}
