//! Seeded Monte-Carlo run of the pipeline preset, printing the summary
//! table. Pass a config file to run that instead.
//!
//! cargo run --release --example bench -- [config]

use dzc_ranging::harness::{parse_config, run_experiment, summarize, summary_csv, ExperimentConfig};

fn main() -> dzc_ranging::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig { trials: 40, ..ExperimentConfig::pipeline_preset(255, 0.1, vec![-10.0, 20.0]) },
    };
    let t0 = std::time::Instant::now();
    let records = run_experiment(&cfg)?;
    let rows = summarize(&records, cfg.threshold_mm, &cfg.acoustics);
    print!("{}", summary_csv(&rows));
    for r in &rows {
        println!(
            "{} @ {:>5} dB: RMSE {:.3} mm, {:.0}% within {} mm, {} failures",
            r.algorithm.name(),
            r.snr_db,
            r.rmse_mm,
            r.p_within * 100.0,
            cfg.threshold_mm,
            r.failures
        );
    }
    eprintln!("{} trials in {:.1}s", records.len(), t0.elapsed().as_secs_f64());
    Ok(())
}
