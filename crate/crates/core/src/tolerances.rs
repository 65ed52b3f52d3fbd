//! Numerical tolerances shared by the library and its tests.

/// Allowed deviation of a code symbol from unit modulus.
pub const UNIT_MODULUS: f64 = 1e-12;

/// Out-of-phase correlation magnitude allowed per unit of code length.
pub const CORR_FLOOR_PER_N: f64 = 1e-9;

/// Symbol-wise tolerance for the differential decode identity.
pub const DECODE_IDENTITY: f64 = 1e-12;

/// Max deviation of the band-limited resampler at ratio 1.
pub const RESAMPLE_IDENTITY: f64 = 1e-9;

/// Agreement between the moving and fixed channel paths at constant velocity.
pub const MOTION_EQUIVALENCE: f64 = 1e-6;

/// Half of the shortest wavelength in the occupied band, in metres.
pub const HALF_LAMBDA_M: f64 = 7.5e-3;

/// Relative Doppler guard band accepted by the resampler and channel.
pub const MAX_ABS_DELTA: f64 = 0.05;
