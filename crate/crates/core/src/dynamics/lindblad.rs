//! Dense Lindblad generators: right-hand side, RK4 stepping and steady
//! state by direct solve of the Liouvillian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::{I, ONE, ZERO};
use crate::numerics::ComplexMatrix;

/// dρ/dt = −i[H, ρ] + Σ D[c]ρ.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    h: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    jumps_dag: Vec<ComplexMatrix>,
    // H − (i/2) Σ c†c
    h_nh: ComplexMatrix,
}

impl Lindbladian {
    pub fn new(h: ComplexMatrix, jumps: Vec<ComplexMatrix>) -> Result<Self> {
        let n = h.rows();
        if !h.is_square() || jumps.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(Error::Shape("Hamiltonian and jump operators must share one square shape".into()));
        }
        let jumps_dag: Vec<ComplexMatrix> = jumps.iter().map(ComplexMatrix::adjoint).collect();
        let mut h_nh = h.clone();
        for (c, cd) in jumps.iter().zip(&jumps_dag) {
            h_nh -= &cd.matmul(c).scale(I * 0.5);
        }
        Ok(Self { h, jumps, jumps_dag, h_nh })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let left = self.h_nh.matmul(rho);
        // −i(H_nh ρ − ρ H_nh†) = −i H_nh ρ + (−i H_nh ρ)†
        let a = left.scale(-I);
        let mut out = &a + &a.adjoint();
        for (c, cd) in self.jumps.iter().zip(&self.jumps_dag) {
            out += &c.matmul(rho).matmul(cd);
        }
        out
    }

    /// One classical RK4 step followed by Hermitian projection and trace
    /// renormalization.
    pub fn rk4_step(&self, rho: &ComplexMatrix, dt: f64) -> ComplexMatrix {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1.scale_real(0.5 * dt)));
        let k3 = self.apply(&(rho + &k2.scale_real(0.5 * dt)));
        let k4 = self.apply(&(rho + &k3.scale_real(dt)));
        let mut sum = k1;
        sum += &k2.scale_real(2.0);
        sum += &k3.scale_real(2.0);
        sum += &k4;
        let mut next = rho + &sum.scale_real(dt / 6.0);
        normalize(&mut next);
        next
    }

    /// Superoperator acting on row-major vec(ρ).
    pub fn superoperator(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut l = ComplexMatrix::zeros(n * n, n * n);
        let id = ComplexMatrix::identity(n);
        let minus_i_hnh = self.h_nh.scale(-I);
        let plus_i_hnh_dag = self.h_nh.adjoint().scale(I);
        let mut add = |a: &ComplexMatrix, b: &ComplexMatrix| {
            // (A ρ B)_{rc} = Σ_ij A_ri ρ_ij B_jc
            for r in 0..n {
                for i in 0..n {
                    let ari = a[(r, i)];
                    if ari == ZERO {
                        continue;
                    }
                    for j in 0..n {
                        for c in 0..n {
                            let bjc = b[(j, c)];
                            if bjc != ZERO {
                                l[(r * n + c, i * n + j)] += ari * bjc;
                            }
                        }
                    }
                }
            }
        };
        add(&minus_i_hnh, &id);
        add(&id, &plus_i_hnh_dag);
        for (c, cd) in self.jumps.iter().zip(&self.jumps_dag) {
            add(c, cd);
        }
        l
    }

    /// Unique steady state, from the Liouvillian with one equation replaced
    /// by tr ρ = 1.
    pub fn steady_state(&self) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut l = self.superoperator();
        for col in 0..n * n {
            l[(0, col)] = ZERO;
        }
        for k in 0..n {
            l[(0, k * n + k)] = ONE;
        }
        let mut rhs = nalgebra::DVector::from_element(n * n, ZERO);
        rhs[0] = ONE;
        let sol = l
            .to_nalgebra()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::invalid("liouvillian", "singular; steady state is not unique"))?;
        let mut rho = ComplexMatrix::from_fn(n, n, |r, c| sol[r * n + c]);
        normalize(&mut rho);
        Ok(rho)
    }
}

/// ρ ← (ρ + ρ†)/2, then ρ ← ρ / tr ρ.
pub fn normalize(rho: &mut ComplexMatrix) {
    rho.symmetrize();
    let tr = rho.trace().re;
    let inv = Complex64::new(1.0 / tr, 0.0);
    for z in rho.as_mut_slice() {
        *z *= inv;
    }
}
