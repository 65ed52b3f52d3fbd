//! IQ sample files: interleaved little-endian f32 (I, Q) pairs with no
//! header, plus a `<file>.meta` sidecar of `key=value` lines.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Sidecar metadata. `fs`, `fc` and `c` are required; other keys are kept verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct IqMeta {
    pub fs: f64,
    pub fc: f64,
    pub c: f64,
    pub extra: BTreeMap<String, String>,
}

impl IqMeta {
    pub fn new(fs: f64, fc: f64, c: f64) -> Self {
        IqMeta { fs, fc, c, extra: BTreeMap::new() }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("fs={}\nfc={}\nc={}\n", self.fs, self.fc, self.c);
        for (k, v) in &self.extra {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("sidecar line {}: expected key=value", lineno + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| -> Result<f64> {
            let v = map
                .remove(key)
                .ok_or_else(|| Error::Config(format!("sidecar missing '{key}'")))?;
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("sidecar '{key}' is not a number: {v}")))
        };
        let (fs, fc, c) = (take("fs")?, take("fc")?, take("c")?);
        Ok(IqMeta { fs, fc, c, extra: map })
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn encode(samples: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 8);
    for v in samples {
        out.extend_from_slice(&(v.re as f32).to_le_bytes());
        out.extend_from_slice(&(v.im as f32).to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Io(format!("IQ payload length {} is not a multiple of 8", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect())
}

pub fn write_iq(path: &Path, samples: &[Complex64], meta: &IqMeta) -> Result<()> {
    fs::write(path, encode(samples))?;
    fs::write(sidecar_path(path), meta.to_text())?;
    Ok(())
}

/// Reads samples and sidecar. A missing sidecar is a config error.
pub fn read_iq(path: &Path) -> Result<(Vec<Complex64>, IqMeta)> {
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side)
        .map_err(|_| Error::Config(format!("missing sidecar {}", side.display())))?;
    let meta = IqMeta::parse(&text)?;
    let samples = decode(&fs::read(path)?)?;
    Ok((samples, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_round_trip() {
        let x = vec![Complex64::new(0.5, -1.25), Complex64::new(3.0, 0.0)];
        let bytes = encode(&x);
        assert_eq!(bytes.len(), 16);
        assert_eq!(decode(&bytes).unwrap(), x);
        assert!(decode(&bytes[..7]).is_err());
    }

    #[test]
    fn sidecar_parse() {
        let m = IqMeta::parse("# comment\nfs=192000\nfc = 20000\nc=345.664\nn=511\n").unwrap();
        assert_eq!(m.fs, 192000.0);
        assert_eq!(m.c, 345.664);
        assert_eq!(m.extra["n"], "511");
        assert_eq!(IqMeta::parse(&m.to_text()).unwrap(), m);
        assert!(IqMeta::parse("fs=1\nfc=2\n").is_err());
        assert!(IqMeta::parse("fs=x\nfc=2\nc=3\n").is_err());
    }
}
