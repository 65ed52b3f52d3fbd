use std::f64::consts::PI;

use dzc_ranging::channel::{
    add_awgn, apply_channel_fixed, apply_channel_moving, periodic_delay, resample, ChannelSpec, MotionProfile, Velocity,
};
use dzc_ranging::SequenceSpec;
use num_complex::Complex64;
use proptest::prelude::*;

fn code(n: usize) -> Vec<Complex64> {
    SequenceSpec::dzc(n, 1).unwrap().symbols(0, n)
}

fn power(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

#[test]
fn snr_is_calibrated() {
    let x = code(4093);
    for (snr, alpha) in [(0.0, 1.0), (-10.0, 0.3), (12.0, 2.0)] {
        let spec = ChannelSpec { tau_samples: 17.0, alpha, snr_db: snr, seed: 5, ..Default::default() };
        let clean = apply_channel_fixed(&x, &ChannelSpec { snr_db: f64::INFINITY, ..spec }).unwrap();
        let noisy = apply_channel_fixed(&x, &spec).unwrap();
        let noise: Vec<Complex64> = noisy.iter().zip(&clean).map(|(a, b)| a - b).collect();
        let measured = 10.0 * (power(&clean) / power(&noise)).log10();
        assert!((measured - snr).abs() < 0.2, "snr {snr}: measured {measured}");
    }
}

#[test]
fn awgn_is_seeded() {
    let x = code(101);
    assert_eq!(add_awgn(&x, 3.0, 9), add_awgn(&x, 3.0, 9));
    assert_ne!(add_awgn(&x, 3.0, 9), add_awgn(&x, 3.0, 10));
    assert_eq!(add_awgn(&x, f64::INFINITY, 9), x);
}

#[test]
fn resampler_tracks_a_tone() {
    // A slow tone survives resampling: y[k] = x(k / r).
    let f = 0.013;
    let x: Vec<Complex64> = (0..2000).map(|k| Complex64::cis(2.0 * PI * f * k as f64)).collect();
    for ratio in [0.97, 1.0, 1.004, 1.03] {
        let y = resample(&x, ratio).unwrap();
        let interior = 40..y.len() - 80;
        let worst = interior
            .map(|k| (y[k] - Complex64::cis(2.0 * PI * f * k as f64 / ratio)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "ratio {ratio}: {worst}");
    }
    assert!(resample(&x, 1.2).is_err());
}

#[test]
fn static_motion_equals_fixed_channel() {
    let x = code(127);
    let motion = MotionProfile { velocity: Velocity::Constant(0.0), c: 345.664, fs: 192e3, fc: 20e3, initial_delay: 33.5 };
    let a = apply_channel_moving(&x, &motion, 0.2, 1.0, 5.0, 1).unwrap();
    let b = apply_channel_fixed(&x, &ChannelSpec { tau_samples: 33.5, theta: 0.2, snr_db: 5.0, seed: 1, ..Default::default() })
        .unwrap();
    assert_eq!(a, b);
}

#[test]
fn approaching_target_shortens_delay() {
    let m = MotionProfile { velocity: Velocity::Constant(1.0), c: 345.664, fs: 192e3, fc: 20e3, initial_delay: 100.0 };
    assert!(m.delay_at(1000.0) < 100.0);
    assert!((m.delay_at(345.664) - 99.0).abs() < 1e-12);
    let bad = MotionProfile { velocity: Velocity::Constant(100.0), ..m };
    assert!(apply_channel_moving(&code(31), &bad, 0.0, 1.0, f64::INFINITY, 0).is_err());
}

#[test]
fn invalid_channels_are_rejected() {
    let x = code(31);
    assert!(apply_channel_fixed(&x, &ChannelSpec { delta: 0.06, ..Default::default() }).is_err());
    assert!(apply_channel_fixed(&x, &ChannelSpec { tau_samples: -1.0, ..Default::default() }).is_err());
    assert!(apply_channel_fixed(&x, &ChannelSpec { alpha: 0.0, ..Default::default() }).is_err());
    assert!(apply_channel_fixed(&x[..1], &ChannelSpec::default()).is_err());
}

proptest! {
    #[test]
    fn fractional_delays_compose(a in 0.0f64..40.0, b in 0.0f64..40.0) {
        let x = code(61);
        let two = periodic_delay(&periodic_delay(&x, a), b);
        let one = periodic_delay(&x, a + b);
        for (p, q) in two.iter().zip(&one) {
            prop_assert!((p - q).norm() < 1e-9);
        }
    }

    #[test]
    fn delay_preserves_energy(tau in 0.0f64..200.0, theta in -3.0f64..3.0, alpha in 0.1f64..4.0) {
        let x = code(127);
        let y = apply_channel_fixed(&x, &ChannelSpec { tau_samples: tau, theta, alpha, ..Default::default() }).unwrap();
        prop_assert!((power(&y) - alpha * alpha).abs() < 1e-9 * alpha * alpha);
    }
}
