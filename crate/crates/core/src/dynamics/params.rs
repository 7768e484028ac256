use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::device::{purcell_rate, saturation_amplitude};
use crate::error::{Error, Result};
use crate::numerics::constants::angular;

/// Largest allowed dt·(fastest rate).
pub const STEP_LIMIT: f64 = 0.01;

/// Reduced spin + cavity parameter set. All rates in 1/s, frequencies in
/// rad/s, drive amplitude in (photons/s)^½.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub g_rad_per_s: f64,
    pub kappa_per_s: f64,
    pub kappa1_per_s: f64,
    pub gamma_phi_per_s: f64,
    pub gamma_dec_per_s: f64,
    pub delta_r_rad_per_s: f64,
    pub delta_s_rad_per_s: f64,
    pub beta_re_sqrt_per_s: f64,
    pub beta_im_sqrt_per_s: f64,
    pub eta: f64,
    pub theta_rad: f64,
    /// Fock-space truncation of the full model.
    pub n_fock: usize,
}

impl ModelParams {
    /// Resonant parameters with the drive set to saturate the spin.
    pub fn resonant(g: f64, kappa: f64, gamma_phi: f64, eta: f64) -> Self {
        let mut p = Self {
            g_rad_per_s: g,
            kappa_per_s: kappa,
            kappa1_per_s: kappa,
            gamma_phi_per_s: gamma_phi,
            gamma_dec_per_s: 0.0,
            delta_r_rad_per_s: 0.0,
            delta_s_rad_per_s: 0.0,
            beta_re_sqrt_per_s: 0.0,
            beta_im_sqrt_per_s: 0.0,
            eta,
            theta_rad: 0.0,
            n_fock: 8,
        };
        p.set_saturating_drive();
        p
    }

    /// Fig. 5 working point: g/2π = 10 kHz, κ = 4.6e5 /s, γ_φ = 1e4 /s.
    pub fn sim() -> Self {
        Self::resonant(angular(1e4), 4.6e5, 1e4, 0.5)
    }

    pub fn nv() -> Self {
        Self::resonant(angular(6.5e3), 0.9e5, 1e5, 0.5)
    }

    pub fn bi() -> Self {
        Self::resonant(angular(8e3), 2.3e5, 1e4, 0.5)
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.beta_re_sqrt_per_s, self.beta_im_sqrt_per_s)
    }

    pub fn set_beta(&mut self, beta: Complex64) {
        self.beta_re_sqrt_per_s = beta.re;
        self.beta_im_sqrt_per_s = beta.im;
    }

    /// Real drive giving |α| = √(γ₁γ₂)/2g.
    pub fn set_saturating_drive(&mut self) {
        let alpha = saturation_amplitude(self.g_rad_per_s, self.gamma_1(), self.gamma_2());
        let k = Complex64::new(self.kappa_per_s, self.delta_r_rad_per_s);
        let beta = k.norm() * alpha / (2.0 * self.kappa1_per_s).sqrt();
        self.set_beta(Complex64::new(beta, 0.0));
    }

    pub fn delta_rs(&self) -> f64 {
        self.delta_r_rad_per_s - self.delta_s_rad_per_s
    }

    pub fn gamma_p(&self) -> f64 {
        purcell_rate(self.g_rad_per_s, self.kappa_per_s, self.delta_rs())
    }

    pub fn gamma_1(&self) -> f64 {
        self.gamma_dec_per_s + self.gamma_p()
    }

    /// Real part of the coherence decay rate, γ₁/2 + γ_φ.
    pub fn gamma_2(&self) -> f64 {
        0.5 * self.gamma_1() + self.gamma_phi_per_s
    }

    /// γ₂ including the rotating-frame detuning, γ₁/2 + γ_φ + i(Δ_s − ε_s),
    /// so that d⟨σ₋⟩/dt = −γ₂⟨σ₋⟩ + … under the effective Hamiltonian.
    pub fn gamma_2_complex(&self) -> Complex64 {
        Complex64::new(self.gamma_2(), self.delta_s_rad_per_s - self.epsilon_s())
    }

    /// AC-Zeeman-like shift ε_s = Δ_rs g²/(κ² + Δ_rs²).
    pub fn epsilon_s(&self) -> f64 {
        let d = self.delta_rs();
        let k = self.kappa_per_s;
        d * self.g_rad_per_s * self.g_rad_per_s / (k * k + d * d)
    }

    /// τ₁ = κ²γ₂/g⁴.
    pub fn tau1(&self) -> f64 {
        self.kappa_per_s.powi(2) * self.gamma_2() / self.g_rad_per_s.powi(4)
    }

    /// Fastest rate of the effective two-level model.
    pub fn max_rate_effective(&self) -> f64 {
        let g_alpha = self.g_rad_per_s * super::steady_alpha(self).norm();
        let detuning = (self.delta_s_rad_per_s - self.epsilon_s()).abs();
        self.gamma_p().max(self.gamma_2()).max(g_alpha).max(detuning)
    }

    /// Fastest rate of the full spin ⊗ cavity model.
    pub fn max_rate_full(&self) -> f64 {
        let drive = (2.0 * self.kappa1_per_s).sqrt() * self.beta().norm();
        self.kappa_per_s
            .max(self.delta_r_rad_per_s.abs())
            .max(self.delta_s_rad_per_s.abs())
            .max(self.g_rad_per_s * (self.n_fock as f64).sqrt())
            .max(drive)
    }

    pub fn default_dt(&self) -> f64 {
        STEP_LIMIT / self.max_rate_effective()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("g_rad_per_s", self.g_rad_per_s),
            ("gamma_phi_per_s", self.gamma_phi_per_s),
            ("gamma_dec_per_s", self.gamma_dec_per_s),
            ("delta_r_rad_per_s", self.delta_r_rad_per_s),
            ("delta_s_rad_per_s", self.delta_s_rad_per_s),
            ("beta_re_sqrt_per_s", self.beta_re_sqrt_per_s),
            ("beta_im_sqrt_per_s", self.beta_im_sqrt_per_s),
            ("theta_rad", self.theta_rad),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if !(self.g_rad_per_s >= 0.0) {
            return Err(Error::invalid("g_rad_per_s", "must be non-negative"));
        }
        if !(self.kappa_per_s > 0.0 && self.kappa_per_s.is_finite()) {
            return Err(Error::invalid("kappa_per_s", "must be positive"));
        }
        if !(self.kappa1_per_s > 0.0 && self.kappa1_per_s <= self.kappa_per_s) {
            return Err(Error::invalid("kappa1_per_s", "must satisfy 0 < kappa1 <= kappa"));
        }
        if self.gamma_phi_per_s < 0.0 || self.gamma_dec_per_s < 0.0 {
            return Err(Error::invalid("gamma_phi_per_s", "decoherence rates must be non-negative"));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::invalid("eta", format!("{} is outside (0, 1]", self.eta)));
        }
        Ok(())
    }

    /// Full-model checks on top of [`ModelParams::validate`].
    pub fn validate_full(&self) -> Result<()> {
        self.validate()?;
        if self.n_fock < 4 {
            return Err(Error::invalid("n_fock", "must be at least 4"));
        }
        if self.n_fock > 32 {
            return Err(Error::invalid("n_fock", "must be at most 32"));
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.kappa_per_s < 5.0 * self.g_rad_per_s {
            out.push(format!(
                "kappa/g = {:.2} is not in the bad-cavity regime (kappa >= 5 g); the effective model may be inaccurate",
                self.kappa_per_s / self.g_rad_per_s
            ));
        }
        out
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("ModelParams serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_rates_match_closed_forms() {
        let mut p = ModelParams::sim();
        p.gamma_dec_per_s = 3.0;
        p.delta_r_rad_per_s = 2e5;
        p.delta_s_rad_per_s = -1e5;
        let (g, k, d) = (p.g_rad_per_s, p.kappa_per_s, 3e5);
        let gp = 2.0 * g * g * k / (k * k + d * d);
        assert!((p.gamma_p() / gp - 1.0).abs() < 1e-12);
        assert!((p.gamma_1() / (gp + 3.0) - 1.0).abs() < 1e-12);
        assert!((p.gamma_2() / ((gp + 3.0) / 2.0 + 1e4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sim_preset_values() {
        let p = ModelParams::sim();
        assert!((p.gamma_p() - 17164.5).abs() < 0.1);
        assert!((p.tau1() * 20.0 - 5.05e-3).abs() < 0.01e-3);
        // beta_sat = sqrt(gamma_2)/2 on resonance with kappa1 = kappa
        assert!((p.beta().re - p.gamma_2().sqrt() / 2.0).abs() < 1e-9);
        let dt = p.default_dt();
        assert!((4e-7..7e-7).contains(&dt), "{dt}");
    }

    #[test]
    fn validation() {
        let mut p = ModelParams::sim();
        assert!(p.validate().is_ok());
        p.eta = 0.0;
        assert!(p.validate().is_err());
        p.eta = 1.0;
        p.kappa1_per_s = 2.0 * p.kappa_per_s;
        assert!(p.validate().is_err());
        let mut p = ModelParams::sim();
        p.n_fock = 3;
        assert!(p.validate_full().is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let p = ModelParams::sim();
        assert_eq!(p.hash(), ModelParams::sim().hash());
        let mut q = p;
        q.eta = 0.25;
        assert_ne!(p.hash(), q.hash());
        assert_eq!(p.hash().len(), 64);
    }

    #[test]
    fn bad_cavity_warning() {
        let mut p = ModelParams::sim();
        assert!(p.warnings().is_empty());
        p.kappa_per_s = 2.0 * p.g_rad_per_s;
        p.kappa1_per_s = p.kappa_per_s;
        assert_eq!(p.warnings().len(), 1);
    }
}
