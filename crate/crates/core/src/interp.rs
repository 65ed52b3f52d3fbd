//! Band-limited interpolation with a Kaiser-windowed sinc kernel.
//!
//! The kernel is tabulated on a polyphase grid and linearly blended
//! between neighbouring phases. Integer positions bypass the table and
//! return the stored sample exactly.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Default one-sided kernel extent in samples.
pub const DEFAULT_HALF_WIDTH: usize = 16;
/// Default Kaiser shape parameter.
pub const DEFAULT_BETA: f64 = 8.0;
const PHASES: usize = 4096;

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut sum, mut term, mut k) = (1.0, 1.0, 1.0);
    loop {
        term *= q / (k * k);
        sum += term;
        if term < 1e-17 * sum {
            return sum;
        }
        k += 1.0;
    }
}

#[derive(Debug, Clone)]
pub struct SincKernel {
    half_width: usize,
    beta: f64,
    /// (PHASES + 1) rows of 2·half_width taps.
    table: Vec<f64>,
}

impl SincKernel {
    pub fn new(half_width: usize, beta: f64) -> Self {
        assert!(half_width >= 1, "half width must be positive");
        let taps = 2 * half_width;
        let mut table = vec![0.0; (PHASES + 1) * taps];
        for p in 0..=PHASES {
            let f = p as f64 / PHASES as f64;
            for (t, w) in table[p * taps..(p + 1) * taps].iter_mut().enumerate() {
                let j = t as i64 - half_width as i64 + 1;
                *w = kernel_value(f - j as f64, half_width, beta);
            }
        }
        SincKernel { half_width, beta, table }
    }

    /// Shared instance with the default half width and shape.
    pub fn standard() -> &'static SincKernel {
        static K: OnceLock<SincKernel> = OnceLock::new();
        K.get_or_init(|| SincKernel::new(DEFAULT_HALF_WIDTH, DEFAULT_BETA))
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Value of the periodic extension of `x` at real position `t`.
    pub fn eval_periodic(&self, x: &[Complex64], t: f64) -> Complex64 {
        self.eval_with(x, t, |i| Some(i.rem_euclid(x.len() as i64) as usize))
    }

    /// Value at `t` treating samples outside `x` as zero.
    pub fn eval_zero_padded(&self, x: &[Complex64], t: f64) -> Complex64 {
        let len = x.len() as i64;
        self.eval_with(x, t, |i| (0..len).contains(&i).then_some(i as usize))
    }

    fn eval_with(&self, x: &[Complex64], t: f64, index: impl Fn(i64) -> Option<usize>) -> Complex64 {
        let i0 = t.floor();
        let frac = t - i0;
        let i0 = i0 as i64;
        if frac == 0.0 {
            return index(i0).map_or(Complex64::new(0.0, 0.0), |i| x[i]);
        }
        let taps = 2 * self.half_width;
        let first = i0 - self.half_width as i64 + 1;
        let pos = frac * PHASES as f64;
        let p = (pos.floor() as usize).min(PHASES - 1);
        let a = pos - p as f64;
        let lo = &self.table[p * taps..(p + 1) * taps];
        let hi = &self.table[(p + 1) * taps..(p + 2) * taps];
        // Contiguous support: blend and accumulate in one pass.
        if let (Some(s), Some(e)) = (index(first), index(first + taps as i64 - 1)) {
            if e >= s && e - s == taps - 1 {
                let (mut re, mut im) = (0.0, 0.0);
                for ((v, l), h) in x[s..=e].iter().zip(lo).zip(hi) {
                    let wt = l + a * (h - l);
                    re += v.re * wt;
                    im += v.im * wt;
                }
                return Complex64::new(re, im);
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..taps {
            if let Some(i) = index(first + t as i64) {
                acc += x[i] * (lo[t] + a * (hi[t] - lo[t]));
            }
        }
        acc
    }
}

fn kernel_value(d: f64, half_width: usize, beta: f64) -> f64 {
    let hw = half_width as f64;
    if d.abs() >= hw {
        return 0.0;
    }
    if d == 0.0 {
        return 1.0;
    }
    if d.fract() == 0.0 {
        return 0.0;
    }
    let u = d / hw;
    let window = bessel_i0(beta * (1.0 - u * u).sqrt()) / bessel_i0(beta);
    (PI * d).sin() / (PI * d) * window
}

/// Linear interpolation of the periodic extension; fast cross-check mode only.
pub fn linear_periodic(x: &[Complex64], t: f64) -> Complex64 {
    let len = x.len() as i64;
    let i0 = t.floor();
    let a = t - i0;
    let i0 = i0 as i64;
    let lo = x[i0.rem_euclid(len) as usize];
    let hi = x[(i0 + 1).rem_euclid(len) as usize];
    lo + (hi - lo) * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_reference_values() {
        assert!((bessel_i0(0.0) - 1.0).abs() < 1e-15);
        assert!((bessel_i0(1.0) - 1.2660658777520082).abs() < 1e-13);
        assert!((bessel_i0(8.0) - 427.56411572180474).abs() < 1e-9);
    }

    #[test]
    fn integer_positions_are_exact() {
        let x: Vec<Complex64> = (0..20).map(|k| Complex64::cis(0.3 * (k * k) as f64)).collect();
        let k = SincKernel::standard();
        for i in -25..45 {
            assert_eq!(k.eval_periodic(&x, i as f64), x[(i as i64).rem_euclid(20) as usize]);
        }
    }

    #[test]
    fn reproduces_in_band_tone() {
        let n = 256;
        let f = 0.11;
        let x: Vec<Complex64> = (0..n).map(|k| Complex64::cis(2.0 * PI * f * k as f64)).collect();
        let k = SincKernel::standard();
        for t in [100.25, 120.5, 130.71, 140.999] {
            let err = (k.eval_zero_padded(&x, t) - Complex64::cis(2.0 * PI * f * t)).norm();
            assert!(err < 1e-4, "t={t} err={err}");
        }
    }

    #[test]
    fn linear_mode_midpoint() {
        let x = vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 2.0)];
        assert_eq!(linear_periodic(&x, 0.5), Complex64::new(1.0, 1.0));
        assert_eq!(linear_periodic(&x, 1.5), Complex64::new(1.0, 1.0));
    }
}
