//! Build ZC and DZC codes, check their periods and show that differential
//! decoding turns a DZC into a ZC.
//!
//! cargo run --example generate_codes -- 63 2

use dzc_ranging::sequences::{differential_decode, dzc_period, zc_sequence};
use dzc_ranging::SequenceSpec;

fn main() -> dzc_ranging::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(63);
    let m = args.next().unwrap_or(1);
    let spec = SequenceSpec::dzc(n, m)?;

    let period = dzc_period(&spec);
    println!("N={n} M={m}: DZC period {period} ({}N)", period / n);

    let dzc = spec.symbols(0, period);
    let decoded = differential_decode(&dzc, 1)?;
    let zc = zc_sequence(&spec)?;
    let worst = decoded.iter().enumerate().map(|(k, v)| (v - zc[k % n]).norm()).fold(0.0, f64::max);
    println!("max |decode(DZC) - ZC| over one period: {worst:.2e}");

    println!("first symbols (k, ZC phase, DZC phase) in radians:");
    for k in 0..6.min(n) {
        println!("  {k:>2}  {:>8.4}  {:>8.4}", zc[k].arg(), dzc[k].arg());
    }

    for n in [5, 9, 4, 6] {
        println!("period rule: N={n:>2} -> {}", dzc_period(&SequenceSpec::dzc(n, 1)?));
    }
    Ok(())
}
