//! Spin ⊗ truncated cavity master equation. Basis ordering is
//! spin ⊗ Fock, so index s·N + n is |s⟩|n⟩.

use num_complex::Complex64;

use super::effective::{SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z};
use super::lindblad::Lindbladian;
use super::params::{ModelParams, STEP_LIMIT};
use crate::error::{Error, Result};
use crate::numerics::matrix::{I, ZERO};
use crate::numerics::{kron, ComplexMatrix};

/// Largest tolerated population in the top Fock level.
pub const LEAKAGE_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub rho: ComplexMatrix,
    pub time_s: f64,
}

#[derive(Clone, Debug)]
pub struct FullModel {
    params: ModelParams,
    n: usize,
    a: ComplexMatrix,
    sigma_minus: ComplexMatrix,
    lindbladian: Lindbladian,
}

fn annihilation(n: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

impl FullModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate_full()?;
        let p = *params;
        let n = p.n_fock;
        let id_f = ComplexMatrix::identity(n);
        let id_s = ComplexMatrix::identity(2);
        let a = kron(&id_s, &annihilation(n));
        let ad = a.adjoint();
        let sm = kron(&SIGMA_MINUS.to_matrix(), &id_f);
        let sp = kron(&SIGMA_PLUS.to_matrix(), &id_f);
        let sz = kron(&SIGMA_Z.to_matrix(), &id_f);

        let beta = p.beta();
        let drive = (2.0 * p.kappa1_per_s).sqrt();
        let mut h = ad.matmul(&a).scale_real(p.delta_r_rad_per_s);
        h += &(&ad.scale(beta) - &a.scale(beta.conj())).scale(I * drive);
        h += &sz.scale_real(0.5 * p.delta_s_rad_per_s);
        h += &(&sp.matmul(&a) + &sm.matmul(&ad)).scale_real(p.g_rad_per_s);

        let jumps = vec![
            a.scale_real((2.0 * p.kappa_per_s).sqrt()),
            sm.scale_real(p.gamma_dec_per_s.sqrt()),
            sz.scale_real((0.5 * p.gamma_phi_per_s).sqrt()),
        ];
        let lindbladian = Lindbladian::new(h, jumps)?;
        Ok(Self { params: p, n, a, sigma_minus: sm, lindbladian })
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn lindbladian(&self) -> &Lindbladian {
        &self.lindbladian
    }

    /// Spin state ⊗ coherent state |α⟩ (truncated and renormalized).
    pub fn product_state(&self, spin: &crate::numerics::Mat2, alpha: Complex64) -> DensityMatrix {
        let mut psi = vec![ZERO; self.n];
        let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for (k, slot) in psi.iter_mut().enumerate() {
            if k > 0 {
                c *= alpha / (k as f64).sqrt();
            }
            *slot = c;
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let field = ComplexMatrix::from_fn(self.n, self.n, |r, c| psi[r] * psi[c].conj() / norm);
        DensityMatrix { rho: kron(&spin.to_matrix(), &field), time_s: 0.0 }
    }

    pub fn field_amplitude(&self, state: &DensityMatrix) -> Complex64 {
        self.a.expectation(&state.rho)
    }

    pub fn sigma_minus(&self, state: &DensityMatrix) -> Complex64 {
        self.sigma_minus.expectation(&state.rho)
    }

    /// Population of the highest retained Fock level.
    pub fn top_level_population(&self, rho: &ComplexMatrix) -> f64 {
        let top = self.n - 1;
        rho[(top, top)].re + rho[(self.n + top, self.n + top)].re
    }

    fn check_leakage(&self, rho: &ComplexMatrix) -> Result<()> {
        let population = self.top_level_population(rho);
        if population > LEAKAGE_LIMIT {
            return Err(Error::FockLeakage { population, limit: LEAKAGE_LIMIT });
        }
        Ok(())
    }

    pub fn step(&self, state: &DensityMatrix, dt: f64) -> Result<DensityMatrix> {
        let max_rate = self.params.max_rate_full();
        if !(dt > 0.0) || dt * max_rate > STEP_LIMIT * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge { dt, max_rate, limit: STEP_LIMIT });
        }
        let rho = self.lindbladian.rk4_step(&state.rho, dt);
        if rho.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step: 0, time: state.time_s + dt });
        }
        self.check_leakage(&rho)?;
        Ok(DensityMatrix { rho, time_s: state.time_s + dt })
    }

    pub fn steady_state(&self) -> Result<DensityMatrix> {
        let rho = self.lindbladian.steady_state()?;
        self.check_leakage(&rho)?;
        Ok(DensityMatrix { rho, time_s: f64::INFINITY })
    }
}

/// One deterministic step of the full master equation.
pub fn lindblad_step_full(state: &DensityMatrix, p: &ModelParams, dt: f64) -> Result<DensityMatrix> {
    FullModel::new(p)?.step(state, dt)
}
