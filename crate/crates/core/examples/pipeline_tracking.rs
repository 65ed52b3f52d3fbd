//! Track an approaching target with the reduced-complexity pipeline and
//! print the per-window range error.
//!
//! cargo run --release --example pipeline_tracking -- 511 0.3 -10

use dzc_ranging::channel::{apply_channel_moving, MotionProfile, Velocity};
use dzc_ranging::estimators::pipeline::{Pipeline, PipelineConfig};
use dzc_ranging::harness::{periods_for_span, preset_segment_length};
use dzc_ranging::{SequenceSpec, DEFAULT_C};

fn main() -> dzc_ranging::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let n = args.first().map_or(511, |&v| v as usize);
    let velocity = args.get(1).copied().unwrap_or(0.3);
    let snr = args.get(2).copied().unwrap_or(-10.0);

    let spec = SequenceSpec::dzc(n, 1)?;
    let seg = preset_segment_length(n);
    let cfg = PipelineConfig {
        segment_length: seg,
        window_step: seg,
        integration_periods: 8,
        doppler_segments: periods_for_span(n, 4096),
        // Steady-state tracking: the previous track supplies the Doppler.
        // A cold start at -10 dB cannot integrate 8 periods coherently.
        initial_delta: velocity / DEFAULT_C,
        ..PipelineConfig::for_n(n)
    };
    let mut pipeline = Pipeline::new(spec, cfg.clone())?;
    // Enough windows to fill the Doppler pool, then a few more to watch it settle.
    let windows = cfg.doppler_segments * n / seg + 40;
    let stream = spec.symbols(0, pipeline.stream_len_for(windows));

    let ac = cfg.acoustics;
    let motion =
        MotionProfile { velocity: Velocity::Constant(velocity), c: ac.c, fs: ac.fs, fc: ac.fc, initial_delay: n as f64 / 3.0 };
    let rx = apply_channel_moving(&stream, &motion, 0.8, 1.0, snr, 11)?;

    println!("{:>7} {:>10} {:>11} {:>10}", "window", "range mm", "error mm", "v_hat m/s");
    let out = pipeline.run(&rx)?;
    let last = out.len() - 1;
    for (i, est) in out.iter().enumerate().filter(|(i, _)| i % 8 == 0 || *i == last) {
        let truth = motion.range_at(est.diag("reference_sample").unwrap_or(0.0));
        println!(
            "{:>7} {:>10.3} {:>+11.4} {:>10.4}",
            i,
            est.d_hat * 1e3,
            (est.d_hat - truth) * 1e3,
            est.diag("delta_hat").unwrap_or(0.0) * ac.c
        );
    }
    println!("true speed {velocity} m/s toward the receiver, {snr} dB SNR");
    Ok(())
}
