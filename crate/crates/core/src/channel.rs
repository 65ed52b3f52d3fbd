//! Synthetic received-signal generation: delay, Doppler, phase,
//! attenuation and AWGN applied to a complex baseband code.
//!
//! Inputs are treated as one period of a periodic transmission, so the
//! delayed and time-scaled signal is always fully covered.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::{bin_omega, fft, ifft};
use crate::interp::SincKernel;
use crate::tolerances::MAX_ABS_DELTA;

/// Parameters of a fixed (time-invariant) delay-Doppler channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// Time of flight in samples, may be fractional.
    pub tau_samples: f64,
    /// Relative Doppler v/c; positive compresses the signal (approaching).
    pub delta: f64,
    /// Carrier offset in cycles per sample.
    pub nu: f64,
    pub theta: f64,
    pub alpha: f64,
    /// Per-sample SNR in dB; `f64::INFINITY` disables noise.
    pub snr_db: f64,
    pub seed: u64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec {
            tau_samples: 0.0,
            delta: 0.0,
            nu: 0.0,
            theta: 0.0,
            alpha: 1.0,
            snr_db: f64::INFINITY,
            seed: 0,
        }
    }
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_samples >= 0.0) || !self.tau_samples.is_finite() {
            return Err(Error::OutOfRange(format!("tau must be finite and >= 0, got {}", self.tau_samples)));
        }
        if !(self.delta.abs() < MAX_ABS_DELTA) {
            return Err(Error::OutOfRange(format!("|delta| must be < {MAX_ABS_DELTA}, got {}", self.delta)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::OutOfRange(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::OutOfRange(format!("invalid snr {}", self.snr_db)));
        }
        if !self.nu.is_finite() || !self.theta.is_finite() {
            return Err(Error::OutOfRange("nu and theta must be finite".into()));
        }
        Ok(())
    }
}

/// Radial velocity over time, in m/s. Positive means approaching.
#[derive(Debug, Clone, PartialEq)]
pub enum Velocity {
    Constant(f64),
    /// Piecewise constant: each `(start_sample, v)` holds until the next start.
    /// Before the first start the velocity is zero.
    Steps(Vec<(usize, f64)>),
    /// Zero until `start`, linear ramp to `peak` over `ramp`, hold for
    /// `cruise`, linear ramp back to zero over `ramp`.
    Trapezoid { start: usize, ramp: usize, cruise: usize, peak: f64 },
    /// Velocity of every sample interval, zero past the end.
    Samples(Vec<f64>),
}

impl Velocity {
    /// Velocity over the sample interval [k, k+1).
    pub fn at(&self, k: usize) -> f64 {
        match self {
            Velocity::Constant(v) => *v,
            Velocity::Steps(steps) => steps
                .iter()
                .take_while(|(s, _)| *s <= k)
                .last()
                .map_or(0.0, |(_, v)| *v),
            Velocity::Trapezoid { start, ramp, cruise, peak } => {
                if k < *start {
                    return 0.0;
                }
                let t = (k - start) as f64 + 0.5;
                let (r, c) = (*ramp as f64, *cruise as f64);
                if r == 0.0 {
                    return if t < c { *peak } else { 0.0 };
                }
                if t < r {
                    peak * t / r
                } else if t < r + c {
                    *peak
                } else if t < 2.0 * r + c {
                    peak * (2.0 * r + c - t) / r
                } else {
                    0.0
                }
            }
            Velocity::Samples(v) => v.get(k).copied().unwrap_or(0.0),
        }
    }

    fn max_abs(&self, len: usize) -> f64 {
        match self {
            Velocity::Constant(v) => v.abs(),
            Velocity::Steps(s) => s.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max),
            Velocity::Trapezoid { peak, .. } => peak.abs(),
            Velocity::Samples(v) => v.iter().take(len.max(1)).map(|v| v.abs()).fold(0.0, f64::max),
        }
    }
}

/// Target motion plus the acoustic constants that map it to samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionProfile {
    pub velocity: Velocity,
    /// Speed of sound, m/s.
    pub c: f64,
    pub fs: f64,
    pub fc: f64,
    /// Time of flight at sample 0, in samples.
    pub initial_delay: f64,
}

impl MotionProfile {
    pub fn validate(&self, len: usize) -> Result<()> {
        if !(self.c > 0.0) || !(self.fs > 0.0) || !(self.fc >= 0.0) {
            return Err(Error::OutOfRange("c and fs must be positive, fc non-negative".into()));
        }
        if !(self.velocity.max_abs(len) < MAX_ABS_DELTA * self.c) {
            return Err(Error::OutOfRange("velocity exceeds 0.05 c".into()));
        }
        if !(self.initial_delay >= 0.0) {
            return Err(Error::OutOfRange("initial delay must be >= 0".into()));
        }
        Ok(())
    }

    /// Cumulative displacement in (m/s)·samples: entry k is the sum of v over [0, k).
    fn cumulative(&self, len: usize) -> Vec<f64> {
        if let Velocity::Constant(v) = self.velocity {
            return (0..=len).map(|k| v * k as f64).collect();
        }
        let mut out = Vec::with_capacity(len + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for k in 0..len {
            acc += self.velocity.at(k);
            out.push(acc);
        }
        out
    }

    fn displacement(&self, t: f64) -> f64 {
        if let Velocity::Constant(v) = self.velocity {
            return v * t;
        }
        let k = t.floor().max(0.0) as usize;
        let mut acc = 0.0;
        for j in 0..k {
            acc += self.velocity.at(j);
        }
        acc + (t - k as f64) * self.velocity.at(k)
    }

    /// Time of flight, in samples, of the signal arriving at sample time `t`.
    pub fn delay_at(&self, t: f64) -> f64 {
        self.initial_delay - self.displacement(t) / self.c
    }

    /// Propagation distance at sample time `t`, metres.
    pub fn range_at(&self, t: f64) -> f64 {
        self.delay_at(t) * self.c / self.fs
    }
}

fn validate_input(x: &[Complex64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::TooShort { needed: 2, have: x.len() });
    }
    Ok(())
}

fn mean_power(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Fixed-Doppler channel applied to the periodic extension of `x`.
///
/// `out[k] = α·x((1+Δ)(k−τ))·e^{i(θ+2πνk)} + n[k]`, same length as `x`.
pub fn apply_channel_fixed(x: &[Complex64], spec: &ChannelSpec) -> Result<Vec<Complex64>> {
    validate_input(x)?;
    spec.validate()?;
    let kernel = SincKernel::standard();
    let scale = 1.0 + spec.delta;
    let shifted = if spec.delta == 0.0 {
        periodic_delay(x, spec.tau_samples)
    } else {
        (0..x.len())
            .map(|k| kernel.eval_periodic(x, scale * (k as f64 - spec.tau_samples)))
            .collect()
    };
    let clean: Vec<Complex64> = shifted
        .into_iter()
        .enumerate()
        .map(|(k, s)| s * Complex64::from_polar(spec.alpha, spec.theta + 2.0 * PI * spec.nu * k as f64))
        .collect();
    let sigma2 = noise_variance(spec.alpha * spec.alpha * mean_power(x), spec.snr_db);
    Ok(add_noise(clean, sigma2, spec.seed))
}

/// Exact band-limited delay of a periodic sequence: a linear phase ramp
/// across its DFT. Integer delays are plain rotations.
pub fn periodic_delay(x: &[Complex64], tau: f64) -> Vec<Complex64> {
    let n = x.len();
    if tau.fract() == 0.0 {
        let t = tau as i64;
        return (0..n as i64).map(|k| x[(k - t).rem_euclid(n as i64) as usize]).collect();
    }
    let mut spec = fft(x);
    for (m, v) in spec.iter_mut().enumerate() {
        *v *= Complex64::cis(-bin_omega(m, n) * tau);
    }
    ifft(&spec)
}

/// Time-varying Doppler channel: the signal is warped sample by sample
/// following the integrated velocity, and the carrier phase accumulates
/// accordingly.
pub fn apply_channel_moving(
    x: &[Complex64],
    motion: &MotionProfile,
    theta: f64,
    alpha: f64,
    snr_db: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    validate_input(x)?;
    motion.validate(x.len())?;
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange(format!("alpha must be > 0, got {alpha}")));
    }
    if snr_db.is_nan() {
        return Err(Error::OutOfRange("snr is NaN".into()));
    }
    if motion.velocity.max_abs(x.len()) == 0.0 {
        let spec = ChannelSpec { tau_samples: motion.initial_delay, theta, alpha, snr_db, seed, ..Default::default() };
        return apply_channel_fixed(x, &spec);
    }
    let kernel = SincKernel::standard();
    let cum = motion.cumulative(x.len());
    let carrier = 2.0 * PI * motion.fc / motion.fs;
    let clean: Vec<Complex64> = (0..x.len())
        .map(|k| {
            let shift = cum[k] / motion.c;
            let u = k as f64 - motion.initial_delay + shift;
            kernel.eval_periodic(x, u) * Complex64::from_polar(alpha, theta + carrier * shift)
        })
        .collect();
    let sigma2 = noise_variance(alpha * alpha * mean_power(x), snr_db);
    Ok(add_noise(clean, sigma2, seed))
}

/// `out[k] = x(k / ratio)` with zero outside the input; length `floor(len·ratio)`.
///
/// Samples whose kernel support leaves the input are edge-affected; callers
/// carry guard samples and trim them.
pub fn resample(x: &[Complex64], ratio: f64) -> Result<Vec<Complex64>> {
    if !(ratio > 1.0 - MAX_ABS_DELTA && ratio < 1.0 + MAX_ABS_DELTA) {
        return Err(Error::OutOfRange(format!("resample ratio {ratio} outside (0.95, 1.05)")));
    }
    let kernel = SincKernel::standard();
    let len = (x.len() as f64 * ratio).floor() as usize;
    Ok((0..len).map(|k| kernel.eval_zero_padded(x, k as f64 / ratio)).collect())
}

fn noise_variance(signal_power: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        signal_power / 10f64.powf(snr_db / 10.0)
    }
}

/// Circular complex Gaussian noise at `snr_db` relative to the mean power of `x`.
pub fn add_awgn(x: &[Complex64], snr_db: f64, seed: u64) -> Vec<Complex64> {
    if x.is_empty() {
        return Vec::new();
    }
    add_noise(x.to_vec(), noise_variance(mean_power(x), snr_db), seed)
}

fn add_noise(mut x: Vec<Complex64>, sigma2: f64, seed: u64) -> Vec<Complex64> {
    if sigma2 == 0.0 {
        return x;
    }
    let sd = (sigma2 / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in x.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(re * sd, im * sd);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{dzc_sequence, SequenceSpec};

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    #[test]
    fn integer_delay_is_circular_shift() {
        let x = dzc_sequence(&SequenceSpec::dzc(31, 1).unwrap(), 31).unwrap();
        let y = apply_channel_fixed(&x, &ChannelSpec { tau_samples: 7.0, ..Default::default() }).unwrap();
        for k in 0..31 {
            assert_eq!(y[k], x[(k + 31 - 7) % 31]);
        }
    }

    #[test]
    fn pure_rotation() {
        let y = apply_channel_fixed(&ones(4), &ChannelSpec { nu: 0.25, ..Default::default() }).unwrap();
        let want = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        for (a, b) in y.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_channels() {
        let x = ones(8);
        assert!(apply_channel_fixed(&x, &ChannelSpec { delta: 0.06, ..Default::default() }).is_err());
        assert!(apply_channel_fixed(&x, &ChannelSpec { alpha: 0.0, ..Default::default() }).is_err());
        assert!(apply_channel_fixed(&x, &ChannelSpec { tau_samples: -1.0, ..Default::default() }).is_err());
        assert!(apply_channel_fixed(&x[..1], &ChannelSpec::default()).is_err());
        assert!(resample(&x, 1.06).is_err());
        assert!(resample(&x, 0.95).is_err());
    }

    #[test]
    fn alpha_is_linear() {
        let x = dzc_sequence(&SequenceSpec::dzc(21, 2).unwrap(), 21).unwrap();
        let base = ChannelSpec { tau_samples: 3.4, delta: 1e-3, nu: 0.01, ..Default::default() };
        let a = apply_channel_fixed(&x, &base).unwrap();
        let b = apply_channel_fixed(&x, &ChannelSpec { alpha: 2.0, ..base }).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert_eq!(u * 2.0, *v);
        }
    }

    #[test]
    fn resample_identity() {
        let x = dzc_sequence(&SequenceSpec::dzc(63, 5).unwrap(), 189).unwrap();
        let y = resample(&x, 1.0).unwrap();
        assert_eq!(y.len(), x.len());
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() <= 1e-9);
        }
    }

    #[test]
    fn awgn_power_and_determinism() {
        let x = ones(1_000_000);
        let y = add_awgn(&x, 0.0, 42);
        let p: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((p - 1.0).abs() < 0.01, "noise power {p}");
        assert_eq!(add_awgn(&x[..100], 0.0, 42), y[..100].to_vec());
        assert_eq!(add_awgn(&x[..100], f64::INFINITY, 42), x[..100].to_vec());
    }

    #[test]
    fn zero_velocity_matches_fixed() {
        let x = dzc_sequence(&SequenceSpec::dzc(31, 3).unwrap(), 31).unwrap();
        let motion = MotionProfile {
            velocity: Velocity::Constant(0.0),
            c: 345.664,
            fs: 192e3,
            fc: 20e3,
            initial_delay: 4.25,
        };
        let a = apply_channel_moving(&x, &motion, 0.3, 1.0, f64::INFINITY, 0).unwrap();
        let spec = ChannelSpec { tau_samples: 4.25, theta: 0.3, ..Default::default() };
        let b = apply_channel_fixed(&x, &spec).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn velocity_profiles() {
        let s = Velocity::Steps(vec![(10, 0.5), (20, -0.2)]);
        assert_eq!(s.at(0), 0.0);
        assert_eq!(s.at(10), 0.5);
        assert_eq!(s.at(25), -0.2);
        let t = Velocity::Trapezoid { start: 0, ramp: 10, cruise: 5, peak: 1.0 };
        assert!((t.at(0) - 0.05).abs() < 1e-12);
        assert_eq!(t.at(12), 1.0);
        assert!((t.at(24) - 0.05).abs() < 1e-12);
        assert_eq!(t.at(30), 0.0);
    }

    #[test]
    fn delay_tracks_integrated_velocity() {
        let motion = MotionProfile {
            velocity: Velocity::Constant(1.0),
            c: 345.664,
            fs: 192e3,
            fc: 20e3,
            initial_delay: 100.0,
        };
        let d = motion.delay_at(192_000.0);
        assert!((d - (100.0 - 192_000.0 / 345.664)).abs() < 1e-9);
        let stepped = MotionProfile { velocity: Velocity::Samples(vec![1.0; 1000]), ..motion.clone() };
        assert!((stepped.delay_at(500.5) - motion.delay_at(500.5)).abs() < 1e-12);
    }
}
