use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Angular-momentum matrices for spin `s` in the |s, m⟩ basis with m
/// descending (index 0 is m = +s).
#[derive(Clone, Debug)]
pub struct SpinOperatorSet {
    two_s: u32,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

impl SpinOperatorSet {
    pub fn s(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    /// Projection quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.s() - k as f64
    }

    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim())
    }
}

pub fn spin_operators(s: f64) -> Result<SpinOperatorSet> {
    let two_s = 2.0 * s;
    if !(two_s >= 0.0) || (two_s - two_s.round()).abs() > 1e-12 || two_s > 200.0 {
        return Err(Error::invalid("s", format!("{s} is not a non-negative half-integer")));
    }
    let two_s = two_s.round() as u32;
    let s = two_s as f64 / 2.0;
    let dim = two_s as usize + 1;
    let m = |k: usize| s - k as f64;

    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits one index up
    let mut raise = ComplexMatrix::zeros(dim, dim);
    for k in 1..dim {
        raise[(k - 1, k)] = Complex64::new((s * (s + 1.0) - m(k) * (m(k) + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower).scale_real(0.5);
    let sy = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    let sz = ComplexMatrix::from_real_diagonal(&(0..dim).map(m).collect::<Vec<_>>());
    Ok(SpinOperatorSet { two_s, sx, sy, sz })
}
