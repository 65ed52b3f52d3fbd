//! Circular cross-correlation and differential sliding correlation.
//!
//! Each correlation has an O(N²) direct form and an FFT form; the
//! default entry points use the FFT form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft, ifft};
use crate::sequences::{ComplexSequence, SequenceSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub values: ComplexSequence,
    pub peak_index: usize,
    pub peak_magnitude: f64,
}

impl CorrelationResult {
    pub fn from_values(values: ComplexSequence) -> Self {
        let mut peak_index = 0;
        let mut peak_magnitude = f64::NEG_INFINITY;
        for (i, v) in values.iter().enumerate() {
            let m = v.norm();
            if m > peak_magnitude {
                peak_magnitude = m;
                peak_index = i;
            }
        }
        CorrelationResult { values, peak_index, peak_magnitude: peak_magnitude.max(0.0) }
    }

    /// Largest magnitude outside `exclude` lags around the peak (circular).
    pub fn secondary_peak(&self, exclude: usize) -> f64 {
        let n = self.values.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let d = (*i + n - self.peak_index) % n;
                d.min(n - d) > exclude
            })
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Direct,
    #[default]
    Fft,
}

fn check_lengths(a: &[Complex64], b: &[Complex64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    if a.is_empty() {
        return Err(Error::TooShort { needed: 1, have: 0 });
    }
    Ok(())
}

/// `r[n] = Σ_k conj(t[k])·y[(k+n) mod N]`.
pub fn circular_xcorr(template: &[Complex64], received: &[Complex64]) -> Result<CorrelationResult> {
    circular_xcorr_with(template, received, Method::Fft)
}

pub fn circular_xcorr_with(
    template: &[Complex64],
    received: &[Complex64],
    method: Method,
) -> Result<CorrelationResult> {
    check_lengths(template, received)?;
    Ok(CorrelationResult::from_values(match method {
        Method::Direct => xcorr_direct(template, received),
        Method::Fft => xcorr_fft(template, received),
    }))
}

fn xcorr_direct(t: &[Complex64], y: &[Complex64]) -> ComplexSequence {
    let n = t.len();
    (0..n)
        .map(|lag| (0..n).map(|k| t[k].conj() * y[(k + lag) % n]).sum())
        .collect()
}

fn xcorr_fft(t: &[Complex64], y: &[Complex64]) -> ComplexSequence {
    let tf = fft(t);
    let yf = fft(y);
    let prod: Vec<Complex64> = tf.iter().zip(&yf).map(|(a, b)| a.conj() * b).collect();
    ifft(&prod)
}

/// Circular products `conj(x[k])·x[k+m]`.
fn lag_products(x: &[Complex64], m: usize) -> ComplexSequence {
    let n = x.len();
    (0..n).map(|k| x[k].conj() * x[(k + m) % n]).collect()
}

fn check_lag(n: usize, m: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::OutOfRange(format!("lag m={m} not in [1, {n})")));
    }
    Ok(())
}

/// `r_D[n,m] = Σ_k conj(x[k])·x[k+m]·y[k+n]·conj(y[k+n+m])`, all indices circular.
pub fn diff_sliding_corr(template: &[Complex64], received: &[Complex64], m: usize) -> Result<CorrelationResult> {
    diff_sliding_corr_with(template, received, m, Method::Fft)
}

pub fn diff_sliding_corr_with(
    template: &[Complex64],
    received: &[Complex64],
    m: usize,
    method: Method,
) -> Result<CorrelationResult> {
    check_lengths(template, received)?;
    check_lag(template.len(), m)?;
    let n = template.len();
    if method == Method::Direct {
        let values = (0..n)
            .map(|lag| {
                (0..n)
                    .map(|k| {
                        template[k].conj()
                            * template[(k + m) % n]
                            * received[(k + lag) % n]
                            * received[(k + lag + m) % n].conj()
                    })
                    .sum()
            })
            .collect();
        return Ok(CorrelationResult::from_values(values));
    }
    // r_D = xcorr(conj(s), p) with s = conj(x)x_m and p = y·conj(y_m)
    let s: Vec<Complex64> = lag_products(template, m).iter().map(|v| v.conj()).collect();
    let p: Vec<Complex64> = lag_products(received, m).iter().map(|v| v.conj()).collect();
    Ok(CorrelationResult::from_values(xcorr_fft(&s, &p)))
}

/// Differential correlation of the window `[start, start+N)` of a stream
/// against `template`. The received products use the true next samples
/// of the stream rather than wrapping inside the window, so a carrier
/// offset cancels exactly.
pub fn diff_sliding_corr_stream(
    template_products: &[Complex64],
    stream: &[Complex64],
    start: usize,
    m: usize,
) -> Result<CorrelationResult> {
    let n = template_products.len();
    check_lag(n, m)?;
    let needed = start + n + m;
    if stream.len() < needed {
        return Err(Error::TooShort { needed, have: stream.len() });
    }
    let s: Vec<Complex64> = template_products.iter().map(|v| v.conj()).collect();
    let p = stream_products(stream, start, n, m);
    Ok(CorrelationResult::from_values(xcorr_fft(&s, &p)))
}

/// `y[k]·conj(y[k+m])` for k in `[start, start+n)`.
pub fn stream_products(stream: &[Complex64], start: usize, n: usize, m: usize) -> ComplexSequence {
    (start..start + n).map(|k| stream[k] * stream[k + m].conj()).collect()
}

/// Differential correlation of `received` against the code named by `template_spec`.
pub fn multi_code_scan(template_spec: &SequenceSpec, received: &[Complex64]) -> Result<CorrelationResult> {
    template_spec.validate()?;
    if received.len() != template_spec.n {
        return Err(Error::LengthMismatch { expected: template_spec.n, got: received.len() });
    }
    let template = template_spec.symbols(0, template_spec.n);
    diff_sliding_corr(&template, received, 1)
}
