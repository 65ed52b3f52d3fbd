//! Delay-Doppler ambiguity of the ML metric for ZC and DZC codes. Prints
//! each code's strongest cells and writes the DZC map as CSV if a path
//! is given.

use dzc_ranging::estimators::ml::{ambiguity_map, MlSearchConfig};
use dzc_ranging::{CodeKind, SequenceSpec};

fn main() -> dzc_ranging::Result<()> {
    let n = 101;
    let (tau, nu) = (50, 0.01);
    let spec = SequenceSpec::dzc(n, 1)?;
    let taus: Vec<usize> = (0..n).collect();
    let nus = MlSearchConfig::for_spec(&spec).nu_grid();

    for kind in [CodeKind::Zc, CodeKind::Dzc] {
        let map = ambiguity_map(&spec.with_kind(kind), tau, nu, &taus, &nus)?;
        let mut cells: Vec<(f64, usize, f64)> = map
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (v, i, j)))
            .map(|(v, i, j)| (v, taus[i], nus[j]))
            .collect();
        cells.sort_by(|a, b| b.0.total_cmp(&a.0));
        let aliases = taus.iter().zip(&map).filter(|(_, r)| r.iter().any(|&v| v > 0.95 * n as f64)).count();
        println!("{}: {aliases} delays reach 0.95N; strongest cells:", kind.name());
        for (v, t, f) in cells.iter().take(4) {
            println!("  tau={t:>3} nu={f:>+8.4} metric={v:.2}");
        }
        if kind == CodeKind::Dzc {
            if let Some(path) = std::env::args().nth(1) {
                let mut csv = String::from("tau");
                nus.iter().for_each(|f| csv.push_str(&format!(",{f}")));
                csv.push('\n');
                for (t, row) in taus.iter().zip(&map) {
                    csv.push_str(&t.to_string());
                    row.iter().for_each(|v| csv.push_str(&format!(",{v}")));
                    csv.push('\n');
                }
                std::fs::write(&path, csv)?;
                println!("wrote {path}");
            }
        }
    }
    Ok(())
}
