use dzc_ranging::channel::{apply_channel_fixed, apply_channel_moving, ChannelSpec, MotionProfile, Velocity};
use dzc_ranging::estimators::ml::{ml_estimate, ml_metric, MlSearchConfig};
use dzc_ranging::estimators::pipeline::{
    compensate_doppler, estimate_doppler, estimate_doppler_robust, initial_tof_window, Pipeline, PipelineConfig,
};
use dzc_ranging::estimators::{min_variance_search, phase_refine, Acoustics};
use dzc_ranging::SequenceSpec;
use proptest::prelude::*;

#[test]
fn ml_recovers_delay_and_carrier() {
    let spec = SequenceSpec::dzc(21, 1).unwrap();
    let code = spec.symbols(0, 21);
    let y = apply_channel_fixed(&code, &ChannelSpec { tau_samples: 10.0, nu: 0.25, theta: 2.0, ..Default::default() })
        .unwrap();
    let est = ml_estimate(&y, &spec, &MlSearchConfig::for_spec(&spec)).unwrap();
    assert_eq!(est.tau_hat, 10);
    assert!((est.nu_hat - 0.25).abs() < 1e-9);
    assert!((ml_metric(&y, &spec, 10, 0.25, 0.0).unwrap() - 21.0).abs() < 1e-6);
}

#[test]
fn ml_rejects_bad_grid() {
    let spec = SequenceSpec::dzc(21, 1).unwrap();
    let y = spec.symbols(0, 21);
    let cfg = MlSearchConfig { nu_step: 0.0, ..MlSearchConfig::for_spec(&spec) };
    assert!(ml_estimate(&y, &spec, &cfg).is_err());
    assert!(ml_estimate(&y[..20], &spec, &MlSearchConfig::for_spec(&spec)).is_err());
}

#[test]
fn doppler_sign_follows_motion() {
    let cfg = PipelineConfig::for_n(511);
    let receding: Vec<(f64, f64)> = (0..20).map(|k| (k as f64 * 511.0, 1.0 + k as f64 * 511.0 * 0.2 / 192e3)).collect();
    let d = estimate_doppler(&receding, &cfg).unwrap();
    assert!((d + 0.2 / 345.664).abs() < 1e-9);
    assert!((estimate_doppler_robust(&receding, &cfg).unwrap() - d).abs() < 1e-9);
}

#[test]
fn robust_doppler_ignores_an_outlier() {
    let cfg = PipelineConfig::for_n(511);
    let mut s: Vec<(f64, f64)> = (0..15).map(|k| (k as f64 * 100.0, 2.0 - k as f64 * 100.0 * 0.3 / 192e3)).collect();
    s[14].1 += 0.05;
    let d = estimate_doppler_robust(&s, &cfg).unwrap();
    assert!((d - 0.3 / 345.664).abs() < 1e-3 * d);
}

#[test]
fn compensation_preserves_length() {
    let x = SequenceSpec::dzc(63, 1).unwrap().symbols(0, 300);
    let y = compensate_doppler(&x, 0.001, &Acoustics::default()).unwrap();
    assert_eq!(y.len(), x.len());
}

#[test]
fn pipeline_tracks_approaching_target() {
    let spec = SequenceSpec::dzc(255, 1).unwrap();
    let ac = Acoustics::default();
    let x = spec.symbols(0, 255 * 14);
    let motion = MotionProfile { velocity: Velocity::Constant(0.3), c: ac.c, fs: ac.fs, fc: ac.fc, initial_delay: 120.4 };
    let y = apply_channel_moving(&x, &motion, 0.9, 1.0, f64::INFINITY, 0).unwrap();
    let cfg = PipelineConfig {
        window_step: 255,
        segment_length: 255,
        integration_periods: 3,
        doppler_segments: 4,
        ..PipelineConfig::for_n(255)
    };
    let mut p = Pipeline::new(spec, cfg).unwrap();
    let out = p.run(&y).unwrap();
    let last = out.last().unwrap();
    let truth = motion.range_at(last.diag("reference_sample").unwrap());
    assert!((last.d_hat - truth).abs() < 0.2e-3, "{} m off", last.d_hat - truth);
    assert!(p.delta_hat() > 0.0);
}

#[test]
fn initial_window_needs_one_extra_sample() {
    let spec = SequenceSpec::dzc(31, 1).unwrap();
    let y = spec.symbols(-4, 32);
    let cfg = PipelineConfig::for_n(31);
    assert_eq!(initial_tof_window(&y, &spec, 0, &cfg).unwrap().tau_hat, 4);
    assert!(initial_tof_window(&y[..31], &spec, 0, &cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_recovers_fraction(int in 10i64..200, frac in -0.5f64..0.5, theta in -3.0f64..3.0) {
        let spec = SequenceSpec::dzc(251, 1).unwrap();
        let cfg = PipelineConfig::for_n(251);
        let mps = cfg.acoustics.metres_per_sample();
        let code = spec.symbols(0, 251);
        let y = apply_channel_fixed(&code, &ChannelSpec { tau_samples: int as f64 + frac, theta, ..Default::default() }).unwrap();
        let d = phase_refine(&y, &spec, int, &cfg).unwrap();
        prop_assert!((d / mps - frac).abs() < 0.01);
    }

    #[test]
    fn search_undoes_integer_errors(err in -12i64..=12, frac in 0.0f64..1.0) {
        let spec = SequenceSpec::dzc(251, 1).unwrap();
        let cfg = PipelineConfig::for_n(251);
        let mps = cfg.acoustics.metres_per_sample();
        let tau = 100.0 + frac;
        let y = apply_channel_fixed(&spec.symbols(0, 251), &ChannelSpec { tau_samples: tau, ..Default::default() }).unwrap();
        let (t, d) = min_variance_search(&y, &spec, 100 + err, &cfg).unwrap();
        prop_assert!((t as f64 + d / mps - tau).abs() < 1e-3);
    }
}
