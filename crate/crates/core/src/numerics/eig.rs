use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as
/// the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// V Λ V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| self.vectors[(r, k)] * self.values[k] * self.vectors[(c, k)].conj()).sum()
        })
    }

    /// Rotate each cluster of eigenvalues closer than `tol` so that `op`,
    /// projected on the cluster, becomes diagonal. Used to attach good quantum
    /// numbers to degenerate levels (zero field, for instance).
    pub fn resolve_degeneracies(&mut self, op: &ComplexMatrix, tol: f64) -> Result<()> {
        let n = self.dim();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (self.values[end] - self.values[end - 1]).abs() <= tol {
                end += 1;
            }
            if end - start > 1 {
                let cols: Vec<Vec<Complex64>> = (start..end).map(|k| self.vector(k)).collect();
                let m = cols.len();
                let projected = ComplexMatrix::from_fn(m, m, |a, b| op.sandwich(&cols[a], &cols[b]));
                let sub = hermitian_eig(&projected)?;
                for j in 0..m {
                    let mut v = vec![ZERO; n];
                    for (a, col) in cols.iter().enumerate() {
                        let w = sub.vectors[(a, j)];
                        for (vi, ci) in v.iter_mut().zip(col) {
                            *vi += ci * w;
                        }
                    }
                    fix_phase(&mut v);
                    for (r, vi) in v.into_iter().enumerate() {
                        self.vectors[(r, start + j)] = vi;
                    }
                }
            }
            start = end;
        }
        Ok(())
    }
}

/// Index of the largest-magnitude component; earliest index wins near-ties.
fn pivot_index(v: &[Complex64]) -> usize {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    v.iter().position(|z| z.norm() >= max * (1.0 - 1e-12)).unwrap_or(0)
}

/// Make the largest-magnitude component real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let p = pivot_index(v);
    let z = v[p];
    if z.norm() == 0.0 {
        return;
    }
    let phase = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
}

/// Diagonalize a Hermitian matrix.
///
/// Output is deterministic: eigenvalues ascend, each eigenvector has its
/// largest-magnitude component real and positive, and eigenvalues equal to
/// within `1e-12·‖m‖` are ordered by the index of that component.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let scale = m.max_abs();
    let asym = m.hermitian_residual();
    if asym > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { residual: asym, scale });
    }
    let mut sym = m.clone();
    sym.symmetrize();
    let eig = nalgebra::SymmetricEigen::new(sym.to_nalgebra());

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in v.iter_mut() {
                *z /= norm;
            }
            fix_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // order exact ties by pivot index
    let tie = 1e-12 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end].0 - pairs[end - 1].0).abs() <= tie {
            end += 1;
        }
        pairs[start..end].sort_by_key(|(_, v)| pivot_index(v));
        start = end;
    }

    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| pairs[c].1[r]);
    Ok(EigenDecomposition { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let vtv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn pauli_z_ascending() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        // eigenvector of -1 is |1>, positive real
        assert_eq!(e.vectors[(1, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rejects_non_hermitian_with_residual() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { residual, .. }) => assert!((residual - 0.5).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn phase_convention_applied() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.3),
                Complex64::new(0.0, -0.3),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eig(&m).unwrap();
        for k in 0..2 {
            let v = e.vector(k);
            let p = pivot_index(&v);
            assert!(v[p].im.abs() < 1e-15 && v[p].re > 0.0);
        }
    }

    #[test]
    fn degeneracy_resolution_diagonalizes_label_operator() {
        // H = diag(0, 0, 1); label op mixes the degenerate pair
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0]);
        let mut e = hermitian_eig(&h).unwrap();
        let mut op = ComplexMatrix::zeros(3, 3);
        op[(0, 1)] = Complex64::new(1.0, 0.0);
        op[(1, 0)] = Complex64::new(1.0, 0.0);
        e.resolve_degeneracies(&op, 1e-12).unwrap();
        for k in 0..2 {
            let v = e.vector(k);
            let ov = op.sandwich(&v, &v).re;
            assert!((ov.abs() - 1.0).abs() < 1e-12);
        }
    }
}
