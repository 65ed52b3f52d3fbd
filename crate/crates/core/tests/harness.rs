use dzc_ranging::harness::{
    cumulative_error, parse_config, run_experiment, run_experiment_serial, summarize, summary_csv, trial_seed,
    trials_csv, Algorithm, ExperimentConfig, Scenario,
};
use dzc_ranging::harness::stats::exact_sum;
use proptest::prelude::*;

fn small() -> ExperimentConfig {
    ExperimentConfig {
        n: 31,
        tau: 9.6,
        trials: 5,
        snr_grid: vec![0.0, 20.0],
        algorithms: Algorithm::ALL.to_vec(),
        ..ExperimentConfig::default()
    }
}

#[test]
fn parallel_equals_serial() {
    let cfg = small();
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment_serial(&cfg).unwrap();
    assert_eq!(trials_csv(&a), trials_csv(&b));
    assert_eq!(a.len(), 2 * 5 * Algorithm::ALL.len());
}

#[test]
fn seed_changes_results() {
    let a = run_experiment(&small()).unwrap();
    let b = run_experiment(&ExperimentConfig { base_seed: 99, ..small() }).unwrap();
    assert_ne!(trials_csv(&a), trials_csv(&b));
}

#[test]
fn summary_is_stable_and_complete() {
    let cfg = small();
    let recs = run_experiment(&cfg).unwrap();
    let rows = summarize(&recs, cfg.threshold_mm, &cfg.acoustics);
    assert_eq!(rows.len(), 2 * Algorithm::ALL.len());
    assert_eq!(summary_csv(&rows), summary_csv(&summarize(&recs, cfg.threshold_mm, &cfg.acoustics)));
    let mut rev = recs.clone();
    rev.reverse();
    let back = summarize(&rev, cfg.threshold_mm, &cfg.acoustics);
    for r in &rows {
        let b = back.iter().find(|b| b.algorithm == r.algorithm && b.snr_db == r.snr_db).unwrap();
        assert_eq!(r.mse_mm2, b.mse_mm2);
    }
    for r in &rows {
        assert!((0.0..=1.0).contains(&r.p_within));
        assert_eq!(r.trials, 5);
    }
}

#[test]
fn cumulative_error_is_monotone() {
    let recs = run_experiment(&small()).unwrap();
    let c = cumulative_error(&recs, &[0.1, 1.0, 10.0, 1e9]);
    assert!(c.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn scenarios_run() {
    for scenario in [Scenario::FixedDoppler, Scenario::ConstantVelocity, Scenario::VelocityProfile] {
        let cfg = ExperimentConfig {
            scenario,
            delta: 1e-4,
            velocity: 0.2,
            trials: 2,
            snr_grid: vec![10.0],
            ..ExperimentConfig::pipeline_preset(63, 0.2, vec![10.0])
        };
        let recs = run_experiment(&cfg).unwrap();
        assert_eq!(recs.len(), 2, "{}", scenario.name());
    }
}

#[test]
fn config_text_round_trip() {
    let cfg = parse_config("# comment\nn = 63\nm = 2\nsnr_db = -10, 0\ntrials = 3\nalgorithms = ml_dzc, diff_dzc\n").unwrap();
    assert_eq!((cfg.n, cfg.m, cfg.trials), (63, 2, 3));
    assert_eq!(cfg.snr_grid, vec![-10.0, 0.0]);
    assert_eq!(cfg.algorithms, vec![Algorithm::MlDzc, Algorithm::DiffDzc]);
    assert!(parse_config("n = 63\nn = 64\nbogus = 1\n").is_err());
}

proptest! {
    #[test]
    fn seeds_differ_across_ids(base in any::<u64>(), a in 0usize..1000, b in 0usize..1000, s in 0usize..4) {
        prop_assume!(a != b);
        prop_assert_ne!(trial_seed(base, a, s), trial_seed(base, b, s));
        prop_assert_ne!(trial_seed(base, a, s), trial_seed(base, a, s + 1));
    }

    #[test]
    fn exact_sum_is_order_independent(mut v in prop::collection::vec(-1e12f64..1e12, 0..50)) {
        let s = exact_sum(v.iter().copied());
        v.reverse();
        prop_assert_eq!(s, exact_sum(v.iter().copied()));
    }
}
