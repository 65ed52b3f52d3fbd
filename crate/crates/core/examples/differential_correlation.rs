//! Ordinary correlation against differential correlation when the
//! received code carries a carrier offset.

use dzc_ranging::channel::{apply_channel_fixed, ChannelSpec};
use dzc_ranging::correlation::{circular_xcorr, diff_sliding_corr};
use dzc_ranging::SequenceSpec;

fn main() -> dzc_ranging::Result<()> {
    let n = 127;
    let tau = 40.0;
    let zc = SequenceSpec::zc(n, 1)?.symbols(0, n);
    let dzc = SequenceSpec::dzc(n, 1)?.symbols(0, n);

    println!("{:>8} {:>16} {:>16}", "nu", "ZC xcorr peak", "DZC diff peak");
    for nu in [0.0, 0.002, 0.01, 0.03, 0.1] {
        let ch = ChannelSpec { tau_samples: tau, nu, theta: 1.3, ..Default::default() };
        let rz = circular_xcorr(&zc, &apply_channel_fixed(&zc, &ch)?)?;
        let rd = diff_sliding_corr(&dzc, &apply_channel_fixed(&dzc, &ch)?, 1)?;
        println!(
            "{nu:>8} {:>8} ({:>5.1}) {:>8} ({:>5.1})",
            rz.peak_index, rz.peak_magnitude, rd.peak_index, rd.peak_magnitude
        );
    }
    println!("true delay {tau}; magnitudes are out of N={n}");
    Ok(())
}
