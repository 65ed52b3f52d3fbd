//! Doppler-robust ultrasound ranging with Differential Zadoff-Chu codes.
//!
//! The crate is organised bottom-up:
//!
//! - [`sequences`]: ZC and DZC code generation, periods and differential decoding.
//! - [`channel`]: delay, Doppler, phase, attenuation and noise synthesis.
//! - [`correlation`]: circular and differential sliding correlation.
//! - [`estimators`]: maximum-likelihood grid search and the reduced-complexity pipeline.
//! - [`harness`]: seeded Monte-Carlo experiments with CSV output.
//! - [`iq`]: the IQ file format shared with the `dzc` command-line tool.

pub mod channel;
pub mod correlation;
pub mod error;
pub mod estimators;
pub mod fft;
pub mod harness;
pub mod interp;
pub mod iq;
pub mod sequences;
pub mod tolerances;

pub use error::{Error, Result};
pub use sequences::{CodeKind, ComplexSequence, SequenceSpec};

/// Sample rate used throughout the examples, Hz.
pub const DEFAULT_FS: f64 = 192_000.0;
/// Carrier frequency, Hz.
pub const DEFAULT_FC: f64 = 20_000.0;
/// Speed of sound, m/s.
pub const DEFAULT_C: f64 = 345.664;
