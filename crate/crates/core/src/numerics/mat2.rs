//! Stack-allocated 2×2 complex matrices for the two-level hot loop.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    #[inline]
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    #[inline]
    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[inline]
    pub fn scale_real(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// tr(self · rho)
    #[inline]
    pub fn expectation(&self, rho: &Mat2) -> Complex64 {
        let (a, r) = (&self.0, &rho.0);
        a[0][0] * r[0][0] + a[0][1] * r[1][0] + a[1][0] * r[0][1] + a[1][1] * r[1][1]
    }

    /// Project onto the Hermitian part.
    #[inline]
    pub fn hermitian_part(&self) -> Self {
        let m = &self.0;
        let off = (m[0][1] + m[1][0].conj()) * 0.5;
        Mat2([
            [Complex64::new(m[0][0].re, 0.0), off],
            [off.conj(), Complex64::new(m[1][1].re, 0.0)],
        ])
    }

    pub fn hermitian_residual(&self) -> f64 {
        let m = &self.0;
        (m[0][1] - m[1][0].conj())
            .norm()
            .max(m[0][0].im.abs())
            .max(m[1][1].im.abs())
    }

    /// Smallest eigenvalue of the Hermitian part.
    #[inline]
    pub fn min_eigenvalue(&self) -> f64 {
        let m = &self.0;
        let half_tr = 0.5 * (m[0][0].re + m[1][1].re);
        let half_diff = 0.5 * (m[0][0].re - m[1][1].re);
        let off = (m[0][1] + m[1][0].conj()) * 0.5;
        half_tr - (half_diff * half_diff + off.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| self.0[r][c])
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (2, 2));
        Mat2([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    #[inline]
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    #[inline]
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}
