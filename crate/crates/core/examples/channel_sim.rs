//! Pass a DZC through the fixed and moving channel models and report what
//! came out: received SNR and the delay seen by a plain correlator.

use dzc_ranging::channel::{apply_channel_fixed, apply_channel_moving, ChannelSpec, MotionProfile, Velocity};
use dzc_ranging::correlation::circular_xcorr;
use dzc_ranging::{SequenceSpec, DEFAULT_C, DEFAULT_FC, DEFAULT_FS};
use num_complex::Complex64;

fn power(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

fn main() -> dzc_ranging::Result<()> {
    let spec = SequenceSpec::dzc(511, 1)?;
    let code = spec.symbols(0, 511);

    let ch = ChannelSpec { tau_samples: 123.0, theta: 0.5, alpha: 0.8, snr_db: 0.0, seed: 7, ..Default::default() };
    let clean = apply_channel_fixed(&code, &ChannelSpec { snr_db: f64::INFINITY, ..ch })?;
    let noisy = apply_channel_fixed(&code, &ch)?;
    let noise: Vec<Complex64> = noisy.iter().zip(&clean).map(|(a, b)| a - b).collect();
    println!("fixed channel: requested 0 dB, measured {:.2} dB", 10.0 * (power(&clean) / power(&noise)).log10());
    println!("  correlator peak at {}", circular_xcorr(&code, &noisy)?.peak_index);

    // A tenth of a second of a 0.5 m/s approach, as a periodic stream.
    let stream = spec.symbols(0, 511 * 38);
    let motion = MotionProfile {
        velocity: Velocity::Constant(0.5),
        c: DEFAULT_C,
        fs: DEFAULT_FS,
        fc: DEFAULT_FC,
        initial_delay: 200.0,
    };
    let rx = apply_channel_moving(&stream, &motion, 0.0, 1.0, f64::INFINITY, 0)?;
    for t in [0usize, 511 * 19, 511 * 37] {
        println!(
            "moving: t={:.3}s true delay {:.3} samples, range {:.2} mm, sample magnitude {:.3}",
            t as f64 / DEFAULT_FS,
            motion.delay_at(t as f64),
            motion.range_at(t as f64) * 1e3,
            rx[t].norm()
        );
    }
    Ok(())
}
