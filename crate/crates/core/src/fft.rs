//! Thread-local FFT planning so repeated transforms reuse plans.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward DFT, unnormalized.
pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    fft_in_place(&mut buf);
    buf
}

pub fn fft_in_place(buf: &mut [Complex64]) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Inverse DFT, normalized by 1/len.
pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    if buf.is_empty() {
        return buf;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(&mut buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Signed angular frequency of DFT bin `m` of a length-`n` transform, in (-π, π].
pub fn bin_omega(m: usize, n: usize) -> f64 {
    let m = m as f64;
    let n_f = n as f64;
    let w = 2.0 * std::f64::consts::PI * m / n_f;
    if 2 * (m as usize) > n {
        w - 2.0 * std::f64::consts::PI
    } else {
        w
    }
}
