//! Zadoff-Chu (ZC) and Differential Zadoff-Chu (DZC) code generation.
//!
//! Phases are evaluated from exact integer products reduced modulo the
//! phase denominator, so arbitrarily long emitted streams stay exact.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type ComplexSequence = Vec<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeKind {
    Zc,
    Dzc,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Zc => "zc",
            CodeKind::Dzc => "dzc",
        }
    }
}

impl std::str::FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zc" => Ok(CodeKind::Zc),
            "dzc" => Ok(CodeKind::Dzc),
            other => Err(Error::InvalidSpec(format!("unknown code kind '{other}'"))),
        }
    }
}

/// A code family: length `n`, root `m` and kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    pub n: usize,
    pub m: usize,
    pub kind: CodeKind,
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl SequenceSpec {
    pub fn new(n: usize, m: usize, kind: CodeKind) -> Result<Self> {
        let spec = SequenceSpec { n, m, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn zc(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, CodeKind::Zc)
    }

    pub fn dzc(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, CodeKind::Dzc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("N must be at least 2, got {}", self.n)));
        }
        if self.m == 0 || self.m >= self.n {
            return Err(Error::InvalidSpec(format!(
                "M must satisfy 0 < M < N (N={}, M={})",
                self.n, self.m
            )));
        }
        if gcd(self.n, self.m) != 1 {
            return Err(Error::NotCoprime { n: self.n, m: self.m });
        }
        Ok(())
    }

    /// Same (N, M) with a different kind.
    pub fn with_kind(&self, kind: CodeKind) -> Self {
        SequenceSpec { kind, ..*self }
    }

    /// Repetition period of the emitted symbol stream.
    pub fn period(&self) -> usize {
        match self.kind {
            CodeKind::Zc => self.n,
            CodeKind::Dzc => dzc_period(self),
        }
    }

    /// Symbol at an arbitrary (possibly negative) index of the infinite stream.
    pub fn symbol(&self, k: i64) -> Complex64 {
        match self.kind {
            CodeKind::Zc => Complex64::cis(zc_phase(self.n, self.m, k)),
            CodeKind::Dzc => Complex64::cis(dzc_phase(self.n, self.m, k)),
        }
    }

    /// `length` consecutive symbols starting at stream index `start`.
    pub fn symbols(&self, start: i64, length: usize) -> ComplexSequence {
        (0..length as i64).map(|k| self.symbol(start + k)).collect()
    }
}

/// ZC phase in [0, 2π).
pub fn zc_phase(n: usize, m: usize, k: i64) -> f64 {
    let (n128, k) = (n as i128, k as i128);
    let prod = if n % 2 == 1 { k * (k + 1) } else { k * k };
    let r = (m as i128 * prod).rem_euclid(2 * n128);
    PI * r as f64 / n as f64
}

/// DZC phase in [0, 2π), with the arbitrary constant fixed to zero.
pub fn dzc_phase(n: usize, m: usize, k: i64) -> f64 {
    let (n128, k) = (n as i128, k as i128);
    if n % 2 == 1 {
        let r = (m as i128 * k * (k + 1) * (k - 1)).rem_euclid(6 * n128);
        PI * r as f64 / (3 * n) as f64
    } else {
        // k(k - 1/2)(k - 1) = k(2k - 1)(k - 1) / 2
        let r = (m as i128 * k * (2 * k - 1) * (k - 1)).rem_euclid(12 * n128);
        PI * r as f64 / (6 * n) as f64
    }
}

/// One length-N block of the ZC code.
pub fn zc_sequence(spec: &SequenceSpec) -> Result<ComplexSequence> {
    spec.validate()?;
    Ok(spec.with_kind(CodeKind::Zc).symbols(0, spec.n))
}

/// `length` DZC symbols starting at index 0.
pub fn dzc_sequence(spec: &SequenceSpec, length: usize) -> Result<ComplexSequence> {
    spec.validate()?;
    if length < spec.n {
        return Err(Error::OutOfRange(format!(
            "DZC length {length} shorter than N={}",
            spec.n
        )));
    }
    Ok(spec.with_kind(CodeKind::Dzc).symbols(0, length))
}

/// Smallest P with a[k+P] = a[k] for all k.
pub fn dzc_period(spec: &SequenceSpec) -> usize {
    let n = spec.n;
    if n % 2 == 1 {
        if n % 3 == 0 {
            3 * n
        } else {
            n
        }
    } else if (2 * n - 1) % 3 == 0 || (n - 1) % 3 == 0 {
        4 * n
    } else {
        12 * n
    }
}

/// `out[k] = conj(seq[k]) * seq[(k + step) mod len]`.
pub fn differential_decode(seq: &[Complex64], step: usize) -> Result<ComplexSequence> {
    let len = seq.len();
    if len == 0 {
        return Err(Error::TooShort { needed: 1, have: 0 });
    }
    if step == 0 || step >= len {
        return Err(Error::OutOfRange(format!("step {step} not in [1, {len})")));
    }
    Ok((0..len).map(|k| seq[k].conj() * seq[(k + step) % len]).collect())
}
