//! Resonator-side design quantities: zero-point current, field of a
//! rectangular nanowire, kinetic inductance, and the derived detection
//! figures (Purcell rate, saturation amplitude, measurement time).

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::constants::{H, HBAR, KB, MU0};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorParams {
    pub omega_r_rad_per_s: f64,
    pub z_r_ohm: f64,
    /// Total field decay rate κ, 1/s.
    pub kappa_per_s: f64,
    /// Coupler decay rate κ₁ ≤ κ, 1/s.
    pub kappa1_per_s: f64,
}

impl ResonatorParams {
    /// Loaded quality factor, κ = ω_r/(2Q).
    pub fn quality_factor(&self) -> f64 {
        self.omega_r_rad_per_s / (2.0 * self.kappa_per_s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_r_rad_per_s > 0.0) {
            return Err(Error::invalid("omega_r_rad_per_s", "must be positive"));
        }
        if !(self.z_r_ohm > 0.0) {
            return Err(Error::invalid("z_r_ohm", "must be positive"));
        }
        if !(self.kappa_per_s > 0.0) {
            return Err(Error::invalid("kappa_per_s", "must be positive"));
        }
        if !(self.kappa1_per_s > 0.0 && self.kappa1_per_s <= self.kappa_per_s) {
            return Err(Error::invalid("kappa1_per_s", "must satisfy 0 < kappa1 <= kappa"));
        }
        Ok(())
    }
}

/// Nanowire constriction. Axis along z, cross-section centered at the
/// origin with width along x and thickness along y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NanowireGeometry {
    pub width_m: f64,
    pub thickness_m: f64,
    pub length_m: f64,
    pub sheet_resistance_ohm: f64,
    /// Superconducting gap Δ, J.
    pub gap_j: f64,
    pub temperature_k: f64,
}

impl NanowireGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("width_m", self.width_m),
            ("thickness_m", self.thickness_m),
            ("length_m", self.length_m),
            ("gap_j", self.gap_j),
            ("temperature_k", self.temperature_k),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.sheet_resistance_ohm >= 0.0) {
            return Err(Error::invalid("sheet_resistance_ohm", "must be non-negative"));
        }
        Ok(())
    }

    /// Fabrication-limit warnings (lithography width, thin-film
    /// superconductor–insulator transition).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.width_m < 15e-9 {
            out.push(format!("nanowire width {:.1} nm is below the ~15 nm lithography limit", self.width_m * 1e9));
        }
        if self.thickness_m < 10e-9 {
            out.push(format!(
                "nanowire thickness {:.1} nm risks a superconducting-to-insulating transition",
                self.thickness_m * 1e9
            ));
        }
        out
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x.abs() <= 0.5 * self.width_m && y.abs() <= 0.5 * self.thickness_m
    }
}

/// Vacuum r.m.s. current of the resonator mode, δi = ω_r √(ħ/2Z_r).
pub fn zero_point_current(r: &ResonatorParams) -> f64 {
    r.omega_r_rad_per_s * (HBAR / (2.0 * r.z_r_ohm)).sqrt()
}

// ∫∫ v/(u²+v²) du dv up to terms that cancel in the corner sum
fn kernel_x(u: f64, v: f64) -> f64 {
    let r2 = u * u + v * v;
    let log_term = if r2 > 0.0 { 0.5 * u * r2.ln() } else { 0.0 };
    let atan_term = if v != 0.0 { v * (u / v).atan() } else { 0.0 };
    log_term + atan_term
}

/// Field (Bx, By, Bz) in tesla at `(x, y)` of an infinite straight wire
/// along z carrying `current` (A) with uniform density over the w×t
/// cross-section. Closed form of the integrated 2-D Biot–Savart kernel.
pub fn rect_wire_field(geom: &NanowireGeometry, current: f64, x: f64, y: f64) -> Result<[f64; 3]> {
    if geom.contains(x, y) {
        return Err(Error::InsideConductor { x, y });
    }
    let (a, b) = (0.5 * geom.width_m, 0.5 * geom.thickness_m);
    let k = MU0 * current / (geom.width_m * geom.thickness_m) / (2.0 * PI);
    let corners = |f: &dyn Fn(f64, f64) -> f64| f(x + a, y + b) - f(x - a, y + b) - f(x + a, y - b) + f(x - a, y - b);
    let gx = corners(&|u, v| kernel_x(u, v));
    let gy = corners(&|u, v| kernel_x(v, u));
    Ok([-k * gx, k * gy, 0.0])
}

pub fn field_magnitude(b: [f64; 3]) -> f64 {
    (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt()
}

/// L_k = (l/w)(R_□/2π²)(h/Δ)/tanh(Δ/2k_BT).
pub fn kinetic_inductance(geom: &NanowireGeometry) -> f64 {
    let thermal = (geom.gap_j / (2.0 * KB * geom.temperature_k)).tanh();
    geom.length_m / geom.width_m * geom.sheet_resistance_ohm / (2.0 * PI * PI) * (H / geom.gap_j) / thermal
}

/// Purcell rate γ_p = 2g²κ/(κ² + Δ_rs²).
pub fn purcell_rate(g: f64, kappa: f64, detuning_rs: f64) -> f64 {
    2.0 * g * g * kappa / (kappa * kappa + detuning_rs * detuning_rs)
}

/// Unit-SNR integration times in the resonant, saturated regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementTime {
    pub gamma_p: f64,
    pub gamma_2: f64,
    /// τ₁ = κ²γ₂/g⁴ at unit efficiency, s.
    pub tau1: f64,
    /// τ_η = τ₁/η, s.
    pub tau_eta: f64,
}

pub fn measurement_time_tau1(g: f64, kappa: f64, gamma_phi: f64, gamma_dec: f64, eta: f64) -> MeasurementTime {
    let gamma_p = purcell_rate(g, kappa, 0.0);
    let gamma_2 = 0.5 * (gamma_p + gamma_dec) + gamma_phi;
    let tau1 = kappa * kappa * gamma_2 / g.powi(4);
    MeasurementTime { gamma_p, gamma_2, tau1, tau_eta: tau1 / eta }
}

/// Saturation amplitude |α|_sat = √(γ₁γ₂)/(2g).
pub fn saturation_amplitude(g: f64, gamma_1: f64, gamma_2: f64) -> f64 {
    (gamma_1 * gamma_2).sqrt() / (2.0 * g)
}

/// η = 1/(1 + N) for N added noise photons.
pub fn efficiency_from_noise_photons(n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(Error::invalid("noise_photons", "must be non-negative"));
    }
    Ok(1.0 / (1.0 + n))
}

/// Added noise photons of an amplifier with noise temperature `t_n`.
pub fn noise_photons(t_n: f64, omega: f64) -> f64 {
    KB * t_n / (HBAR * omega)
}

/// Field map on a regular grid; CSV `x_m,y_m,Bx_T,By_T,absB_T`. Points
/// inside the conductor are skipped.
pub fn write_field_map<W: Write>(
    geom: &NanowireGeometry,
    current: f64,
    xs: &[f64],
    ys: &[f64],
    mut w: W,
) -> Result<()> {
    writeln!(w, "x_m,y_m,Bx_T,By_T,absB_T")?;
    for &y in ys {
        for &x in xs {
            match rect_wire_field(geom, current, x, y) {
                Ok(b) => writeln!(w, "{x:e},{y:e},{:e},{:e},{:e}", b[0], b[1], field_magnitude(b))?,
                Err(Error::InsideConductor { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::constants::{angular, ELEMENTARY_CHARGE};

    fn fig3_wire() -> NanowireGeometry {
        NanowireGeometry {
            width_m: 20e-9,
            thickness_m: 10e-9,
            length_m: 250e-9,
            sheet_resistance_ohm: 4.5,
            gap_j: 230e-6 * ELEMENTARY_CHARGE,
            temperature_k: 0.01,
        }
    }

    fn resonator(f: f64, z: f64) -> ResonatorParams {
        ResonatorParams { omega_r_rad_per_s: angular(f), z_r_ohm: z, kappa_per_s: 1e5, kappa1_per_s: 1e5 }
    }

    #[test]
    fn zero_point_current_quarter_impedance_scaling() {
        let a = zero_point_current(&resonator(2.9e9, 15.3));
        let b = zero_point_current(&resonator(2.9e9, 61.2));
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bi_zero_point_current() {
        let i = zero_point_current(&resonator(7.3e9, 26.5));
        assert!((i / 65e-9 - 1.0).abs() < 0.03, "{i}");
    }

    #[test]
    fn inside_point_rejected() {
        assert!(matches!(rect_wire_field(&fig3_wire(), 1e-9, 0.0, 0.0), Err(Error::InsideConductor { .. })));
        assert!(rect_wire_field(&fig3_wire(), 1e-9, 5e-9, 4e-9).is_err());
    }

    #[test]
    fn far_field_is_line_current() {
        let g = fig3_wire();
        let i = 35e-9;
        let r = 100.0 * 20e-9;
        for (x, y) in [(r, 0.0), (0.0, -r), (r / 2f64.sqrt(), r / 2f64.sqrt())] {
            let b = field_magnitude(rect_wire_field(&g, i, x, y).unwrap());
            let line = MU0 * i / (2.0 * PI * r);
            assert!((b / line - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn field_is_orthoradial_below_wire() {
        let b = rect_wire_field(&fig3_wire(), 35e-9, 0.0, -20e-9).unwrap();
        assert!(b[1].abs() < 1e-20 && b[0] > 0.0);
    }

    #[test]
    fn kinetic_inductance_zero_temperature_limit_and_linearity() {
        let mut g = fig3_wire();
        let base = kinetic_inductance(&g);
        g.temperature_k = 1e-6;
        assert_eq!(kinetic_inductance(&g), base);
        g.length_m *= 2.0;
        assert!((kinetic_inductance(&g) / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn purcell_lorentzian() {
        let (g, k) = (angular(6.5e3), 0.9e5);
        assert!((purcell_rate(g, k, k) / purcell_rate(g, k, 0.0) - 0.5).abs() < 1e-12);
        assert_eq!(purcell_rate(g, k, 3e4), purcell_rate(g, k, -3e4));
        assert!(purcell_rate(g, k, 1e3) < purcell_rate(g, k, 0.0));
    }

    #[test]
    fn tau1_scales_as_inverse_fourth_power() {
        // hold gamma_2 fixed by passing the dephasing that compensates gamma_p
        let k = 4.6e5;
        let g2 = 2e4;
        let t = |g: f64| {
            let gp = purcell_rate(g, k, 0.0);
            measurement_time_tau1(g, k, g2 - gp / 2.0, 0.0, 1.0).tau1
        };
        let (g_a, g_b) = (angular(2e3), angular(2e4));
        assert!((t(g_a) / t(g_b) / 1e4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn saturation_identity() {
        let (g, k, gphi) = (angular(1e4), 4.6e5, 1e4);
        let m = measurement_time_tau1(g, k, gphi, 0.0, 1.0);
        let a = saturation_amplitude(g, m.gamma_p, m.gamma_2);
        assert!((2.0 * g * a - (m.gamma_p * m.gamma_2).sqrt()).abs() < 1e-9 * g);
        // in the resonant case this is sqrt(gamma_2 / 2 kappa)
        assert!((a - (m.gamma_2 / (2.0 * k)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn efficiency_values() {
        assert_eq!(efficiency_from_noise_photons(0.0).unwrap(), 1.0);
        assert_eq!(efficiency_from_noise_photons(1.0).unwrap(), 0.5);
        assert!(efficiency_from_noise_photons(-1.0).is_err());
        let eta = efficiency_from_noise_photons(noise_photons(15.0, angular(7.3e9))).unwrap();
        assert!((0.015..0.025).contains(&eta), "{eta}");
    }

    #[test]
    fn geometry_warnings() {
        let mut g = fig3_wire();
        assert!(g.warnings().is_empty());
        g.width_m = 12e-9;
        g.thickness_m = 8e-9;
        assert_eq!(g.warnings().len(), 2);
        g.width_m = -1.0;
        assert!(g.validate().is_err());
    }
}
