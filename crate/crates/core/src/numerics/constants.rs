//! Physical constants (CODATA 2018, exact SI values where defined).

use std::f64::consts::PI;

pub const H: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = H / (2.0 * PI);
pub const KB: f64 = 1.380_649e-23;
pub const MU0: f64 = 1.256_637_062_12e-6;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron gyromagnetic ratio in rad/(s·T); γ_e/2π = 28 GHz/T.
pub const GAMMA_E: f64 = 2.0 * PI * 28.0e9;

pub const TWO_PI: f64 = 2.0 * PI;

/// Convert a frequency in Hz to angular frequency.
#[inline]
pub fn angular(hz: f64) -> f64 {
    TWO_PI * hz
}

/// Convert an angular frequency to Hz.
#[inline]
pub fn hertz(rad_per_s: f64) -> f64 {
    rad_per_s / TWO_PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gyromagnetic_ratio_is_28_ghz_per_tesla() {
        assert_eq!(hertz(GAMMA_E), 28.0e9);
    }

    #[test]
    fn hbar_consistent_with_h() {
        assert!((HBAR * TWO_PI / H - 1.0).abs() < 1e-15);
    }
}
