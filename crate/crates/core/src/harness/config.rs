//! Bench configuration: flat `key = value` lines, or a JSON object with
//! the same keys.
//!
//! Lists (`snr_db`, `algorithms`) are comma separated in the flat form and
//! arrays in JSON. `#` starts a comment. Unknown keys are rejected.
//!
//! ```text
//! scenario = fixed_doppler
//! n = 21
//! m = 1
//! tau = 10
//! nu = 1
//! snr_db = -10, 0, 10, 20
//! trials = 500
//! algorithms = ml_zc, ml_dzc
//! base_seed = 7
//! ```

use std::collections::BTreeMap;

use super::{Algorithm, ExperimentConfig, Scenario};
use crate::error::{Error, Result};

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| Error::Config(format!("'{key}': cannot parse '{v}'")))
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    match v.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => {
            let x: f64 = parse_num(key, v)?;
            if x.is_nan() {
                return Err(Error::Config(format!("'{key}' is NaN")));
            }
            Ok(x)
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("'{key}': expected a boolean, got '{v}'"))),
    }
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn flatten_json(text: &str) -> Result<BTreeMap<String, String>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| Error::Config("JSON config must be an object".into()))?;
    let scalar = |key: &str, v: &serde_json::Value| -> Result<String> {
        match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            serde_json::Value::Bool(b) => Ok(b.to_string()),
            _ => Err(Error::Config(format!("'{key}': unsupported JSON value"))),
        }
    };
    obj.iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::Array(items) => {
                    items.iter().map(|i| scalar(k, i)).collect::<Result<Vec<_>>>()?.join(",")
                }
                other => scalar(k, other)?,
            };
            Ok((k.clone(), s))
        })
        .collect()
}

fn flatten_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
        let k = k.trim().to_string();
        if map.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{k}'", no + 1)));
        }
    }
    Ok(map)
}

/// Parses and validates a bench configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let map = if text.trim_start().starts_with('{') { flatten_json(text)? } else { flatten_kv(text)? };
    let mut cfg = match map.get("preset").map(|v| v.trim()) {
        None => ExperimentConfig::default(),
        Some("ml") => ExperimentConfig::ml_preset(),
        Some("pipeline") => {
            let n = map.get("n").map(|v| parse_num("n", v)).transpose()?.unwrap_or(511);
            let v = map.get("velocity").map(|v| parse_f64("velocity", v)).transpose()?.unwrap_or(0.1);
            ExperimentConfig::pipeline_preset(n, v, vec![-10.0])
        }
        Some(other) => return Err(Error::Config(format!("unknown preset '{other}'"))),
    };
    for (k, v) in &map {
        let key = k.as_str();
        match key {
            "preset" => {}
            "scenario" => cfg.scenario = Scenario::parse(v.trim())?,
            "n" => cfg.n = parse_num(key, v)?,
            "m" => cfg.m = parse_num(key, v)?,
            "tau" => cfg.tau = parse_f64(key, v)?,
            "delta" => cfg.delta = parse_f64(key, v)?,
            "nu" => cfg.nu = parse_f64(key, v)?,
            "theta" => cfg.theta = parse_f64(key, v)?,
            "velocity" => cfg.velocity = parse_f64(key, v)?,
            "snr_db" => cfg.snr_grid = list(v).into_iter().map(|s| parse_f64(key, s)).collect::<Result<_>>()?,
            "trials" => cfg.trials = parse_num(key, v)?,
            "algorithms" => cfg.algorithms = list(v).into_iter().map(Algorithm::parse).collect::<Result<_>>()?,
            "base_seed" => cfg.base_seed = parse_num(key, v)?,
            "fs" => cfg.acoustics.fs = parse_f64(key, v)?,
            "fc" => cfg.acoustics.fc = parse_f64(key, v)?,
            "c" => cfg.acoustics.c = parse_f64(key, v)?,
            "integration_periods" => cfg.integration_periods = parse_num(key, v)?,
            "segment_length" => cfg.segment_length = Some(parse_num(key, v)?),
            "window_step" => cfg.window_step = Some(parse_num(key, v)?),
            "candidate_window" => cfg.candidate_window = Some(parse_num(key, v)?),
            "valid_bin_ratio" => cfg.valid_bin_ratio = parse_f64(key, v)?,
            "refine_mode" => cfg.refine_mode = v.trim().parse()?,
            "doppler_segments" => cfg.doppler_segments = parse_num(key, v)?,
            "doppler_prior" => cfg.doppler_prior = parse_bool(key, v)?,
            "warmup_segments" => cfg.warmup_segments = parse_num(key, v)?,
            "ml_nu_halfwidth" => cfg.ml_nu_halfwidth = Some(parse_f64(key, v)?),
            "ml_nu_step" => cfg.ml_nu_step = Some(parse_f64(key, v)?),
            "ml_coupled" => cfg.ml_coupled = parse_bool(key, v)?,
            "record_runtime" => cfg.record_runtime = parse_bool(key, v)?,
            "threshold_mm" => cfg.threshold_mm = parse_f64(key, v)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_json_agree() {
        let flat = "scenario = fixed_doppler # comment\nn = 21\nm = 1\ntau = 10\nnu = 1\nsnr_db = -10, 0, inf\ntrials = 5\nalgorithms = ml_zc, ml_dzc\n";
        let json = r#"{"scenario": "fixed_doppler", "n": 21, "m": 1, "tau": 10, "nu": 1,
                       "snr_db": [-10, 0, "inf"], "trials": 5, "algorithms": ["ml_zc", "ml_dzc"]}"#;
        let a = parse_config(flat).unwrap();
        assert_eq!(a, parse_config(json).unwrap());
        assert_eq!(a.snr_grid, vec![-10.0, 0.0, f64::INFINITY]);
        assert_eq!(a.algorithms, vec![Algorithm::MlZc, Algorithm::MlDzc]);
    }

    #[test]
    fn presets_seed_then_override() {
        let ml = parse_config("preset = ml\ntrials = 7").unwrap();
        assert_eq!(ml, ExperimentConfig { trials: 7, ..ExperimentConfig::ml_preset() });
        let p = parse_config("preset = pipeline\nn = 255\nsnr_db = 20").unwrap();
        assert_eq!(p, ExperimentConfig { snr_grid: vec![20.0], ..ExperimentConfig::pipeline_preset(255, 0.1, vec![-10.0]) });
    }

    #[test]
    fn malformed() {
        assert!(parse_config("n 21").is_err());
        assert!(parse_config("n = x").is_err());
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("n = 4\nm = 2").is_err());
        assert!(parse_config("n = 21\nn = 22").is_err());
        assert!(parse_config("{\"n\": [1, {}]}").is_err());
        assert!(parse_config("{ not json").is_err());
        assert!(parse_config("algorithms = fft").is_err());
        assert!(parse_config("preset = huge").is_err());
    }
}
