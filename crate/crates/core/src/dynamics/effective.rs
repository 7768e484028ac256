//! Spin-only model after adiabatic elimination of the cavity.
//!
//! Basis: index 0 is the lower spin level |0⟩, index 1 the upper |1⟩, so
//! σ₋ = |0⟩⟨1| and σ_z = diag(−1, 1).

use num_complex::Complex64;

use super::lindblad::Lindbladian;
use super::params::ModelParams;
use crate::error::Result;
use crate::numerics::matrix::{I, ONE, ZERO};
use crate::numerics::Mat2;

pub const SIGMA_MINUS: Mat2 = Mat2([[ZERO, ONE], [ZERO, ZERO]]);
pub const SIGMA_PLUS: Mat2 = Mat2([[ZERO, ZERO], [ONE, ZERO]]);
pub const SIGMA_Z: Mat2 = Mat2([[Complex64 { re: -1.0, im: 0.0 }, ZERO], [ZERO, ONE]]);
pub const SIGMA_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
/// i(σ₋ − σ₊)
pub const SIGMA_Y: Mat2 = Mat2([[ZERO, I], [Complex64 { re: 0.0, im: -1.0 }, ZERO]]);

pub const GROUND: Mat2 = Mat2([[ONE, ZERO], [ZERO, ZERO]]);
pub const EXCITED: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ONE]]);

/// Empty-cavity coherent amplitude α = √(2κ₁)β/(κ + iΔ_r).
pub fn steady_alpha(p: &ModelParams) -> Complex64 {
    (2.0 * p.kappa1_per_s).sqrt() * p.beta() / Complex64::new(p.kappa_per_s, p.delta_r_rad_per_s)
}

/// Effective Hamiltonian (rad/s) and named jump operators.
#[derive(Clone, Debug)]
pub struct EffectiveGenerator {
    pub hamiltonian: Mat2,
    pub jumps: Vec<(&'static str, Mat2)>,
}

impl EffectiveGenerator {
    pub fn lindbladian(&self) -> Result<Lindbladian> {
        Lindbladian::new(self.hamiltonian.to_matrix(), self.jumps.iter().map(|(_, c)| c.to_matrix()).collect())
    }
}

/// H_eff = (Δ_s/2)σ_z + g(ασ₊ + α*σ₋) − ε_s σ₊σ₋ with jumps √γ_p σ₋,
/// √γ_dec σ₋ and √(γ_φ/2) σ_z.
pub fn effective_spin_generator(p: &ModelParams) -> EffectiveGenerator {
    let alpha = steady_alpha(p);
    let g = p.g_rad_per_s;
    let hamiltonian = SIGMA_Z.scale_real(0.5 * p.delta_s_rad_per_s)
        + SIGMA_PLUS.scale(alpha * g)
        + SIGMA_MINUS.scale(alpha.conj() * g)
        - EXCITED.scale_real(p.epsilon_s());
    let jumps = vec![
        ("purcell", SIGMA_MINUS.scale_real(p.gamma_p().sqrt())),
        ("decay", SIGMA_MINUS.scale_real(p.gamma_dec_per_s.sqrt())),
        ("dephasing", SIGMA_Z.scale_real((0.5 * p.gamma_phi_per_s).sqrt())),
    ];
    EffectiveGenerator { hamiltonian, jumps }
}

/// ⟨σ₋⟩ss = −i g α γ₁ γ₂* / (4g²|α|² Re γ₂ + γ₁|γ₂|²).
pub fn steady_sigma_minus(p: &ModelParams) -> Complex64 {
    let g = p.g_rad_per_s;
    let alpha = steady_alpha(p);
    let g1 = p.gamma_1();
    let g2 = p.gamma_2_complex();
    let num = -I * g * alpha * g1 * g2.conj();
    let den = 4.0 * g * g * alpha.norm_sqr() * g2.re + g1 * g2.norm_sqr();
    num / den
}

/// Homodyne operator c_m = e^{−iθ} c_out = c0·𝟙 + c1·σ₋.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementOperator {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl MeasurementOperator {
    pub fn new(p: &ModelParams) -> Self {
        let lo = Complex64::from_polar(1.0, -p.theta_rad);
        let k1 = p.kappa1_per_s;
        let c0 = lo * (2.0 * k1 / Complex64::new(p.kappa_per_s, p.delta_r_rad_per_s) - 1.0) * p.beta();
        let c1 = lo * (-I) * (2.0 * k1).sqrt() * p.g_rad_per_s / Complex64::new(p.kappa_per_s, p.delta_rs());
        Self { c0, c1 }
    }

    /// ⟨c_m + c_m†⟩ for a spin with coherence ⟨σ₋⟩.
    pub fn quadrature(&self, sigma_minus: Complex64) -> f64 {
        2.0 * (self.c0 + self.c1 * sigma_minus).re
    }

    /// Record drift per unit time when no spin is present, 2ηRe c0.
    pub fn bare_rate(&self, eta: f64) -> f64 {
        2.0 * eta * self.c0.re
    }
}

/// ⟨σ₋⟩ = ρ₁₀
pub fn coherence(rho: &Mat2) -> Complex64 {
    rho.0[1][0]
}

/// (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)
pub fn bloch_vector(rho: &Mat2) -> [f64; 3] {
    [SIGMA_X.expectation(rho).re, SIGMA_Y.expectation(rho).re, SIGMA_Z.expectation(rho).re]
}
