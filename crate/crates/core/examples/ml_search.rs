//! Maximum-likelihood delay/carrier search on noisy blocks, ZC against DZC.
//!
//! cargo run --release --example ml_search -- 0

use dzc_ranging::channel::{apply_channel_fixed, ChannelSpec};
use dzc_ranging::estimators::ml::{ml_estimate, MlSearchConfig};
use dzc_ranging::{CodeKind, SequenceSpec};

fn main() -> dzc_ranging::Result<()> {
    let snr: f64 = std::env::args().nth(1).map_or(0.0, |s| s.parse().expect("SNR in dB"));
    let base = SequenceSpec::dzc(21, 1)?;
    let cfg = MlSearchConfig::for_spec(&base);
    let trials = 50;

    for kind in [CodeKind::Zc, CodeKind::Dzc] {
        let spec = base.with_kind(kind);
        let code = spec.symbols(0, spec.n);
        let mut sq = 0.0;
        for seed in 0..trials {
            let ch = ChannelSpec { tau_samples: 10.0, nu: 1.0, theta: 0.3, snr_db: snr, seed, ..Default::default() };
            let est = ml_estimate(&apply_channel_fixed(&code, &ch)?, &spec, &cfg)?;
            let mut e = (est.tau_hat - 10).rem_euclid(21);
            if e > 10 {
                e -= 21;
            }
            sq += (e * e) as f64;
            if seed == 0 {
                println!("{}: first trial tau_hat={} nu_hat={:+.4}", kind.name(), est.tau_hat, est.nu_hat);
            }
        }
        println!("{}: delay MSE {:.3} samples^2 over {trials} trials at {snr} dB", kind.name(), sq / trials as f64);
    }
    Ok(())
}
