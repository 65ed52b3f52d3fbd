//! Three transmitters at 190, 200 and 210 samples, scanned with the M=1 DZC.
//! Same codes give three peaks; distinct roots or plain ZC codes leave one.

use dzc_ranging::channel::periodic_delay;
use dzc_ranging::correlation::multi_code_scan;
use dzc_ranging::{CodeKind, SequenceSpec};
use num_complex::Complex64;

fn main() -> dzc_ranging::Result<()> {
    let n = 511;
    let template = SequenceSpec::dzc(n, 1)?;
    let cases = [
        ("same DZC codes", [(CodeKind::Dzc, 1), (CodeKind::Dzc, 1), (CodeKind::Dzc, 1)]),
        ("DZC roots 1, 5, 9", [(CodeKind::Dzc, 1), (CodeKind::Dzc, 5), (CodeKind::Dzc, 9)]),
        ("DZC 1 with ZC 5, 9", [(CodeKind::Dzc, 1), (CodeKind::Zc, 5), (CodeKind::Zc, 9)]),
    ];
    for (label, codes) in cases {
        let mut rx = vec![Complex64::new(0.0, 0.0); n];
        for ((kind, m), tau) in codes.into_iter().zip([200.0, 190.0, 210.0]) {
            let tx = SequenceSpec::new(n, m, kind)?.symbols(0, n);
            rx.iter_mut().zip(periodic_delay(&tx, tau)).for_each(|(a, b)| *a += b);
        }
        let r = multi_code_scan(&template, &rx)?;
        let mut lags: Vec<usize> = (0..n).collect();
        lags.sort_by(|&a, &b| r.values[b].norm().total_cmp(&r.values[a].norm()));
        let top: Vec<String> =
            lags[..4].iter().map(|&l| format!("{l}:{:.0}", r.values[l].norm())).collect();
        println!("{label:<20} strongest lags {}", top.join("  "));
    }
    Ok(())
}
