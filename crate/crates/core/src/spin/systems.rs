use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operators::{spin_operators, SpinOperatorSet};
use crate::error::Result;
use crate::numerics::constants::{angular, GAMMA_E};
use crate::numerics::{hermitian_eig, kron, ComplexMatrix, EigenDecomposition};

/// Quantum-number label of a spin level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelLabel {
    /// |m_S, m_I⟩ of the NV center; `two_m_i` is 2·m_I.
    Nv { m_s: i32, two_m_i: i32 },
    /// |F, m_F⟩ of the bismuth donor.
    Bi { f: u32, m_f: i32 },
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LevelLabel::Nv { m_s, two_m_i } => {
                let mi = if two_m_i > 0 { '+' } else { '-' };
                if m_s == 0 {
                    write!(f, "mS=0 mI={mi}1/2")
                } else {
                    write!(f, "mS={m_s:+} mI={mi}1/2")
                }
            }
            LevelLabel::Bi { f: big_f, m_f } => write!(f, "F={big_f} mF={m_f:+}"),
        }
    }
}

/// A spin Hamiltonian that depends on the applied static field.
///
/// Energies are angular frequencies (H/ħ in rad/s); fields are in tesla,
/// given in the system's own frame.
pub trait SpinSystem {
    fn dim(&self) -> usize;

    fn hamiltonian(&self, field: [f64; 3]) -> ComplexMatrix;

    /// Electron spin operators (S_x, S_y, S_z) embedded in the joint space.
    fn electron_operators(&self) -> &[ComplexMatrix; 3];

    /// Operator whose eigenvalues separate degenerate levels.
    fn label_operator(&self, field: [f64; 3]) -> ComplexMatrix;

    /// Quantum-number label of eigenvector `rank` (ascending energy order).
    fn label(&self, field: [f64; 3], rank: usize, vector: &[Complex64]) -> LevelLabel;

    /// Human-readable warnings when `field` is outside the model's range.
    fn field_warnings(&self, field: [f64; 3]) -> Vec<String>;
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn zeeman(ops: &[ComplexMatrix; 3], field: [f64; 3]) -> ComplexMatrix {
    let mut h = ops[0].scale_real(-GAMMA_E * field[0]);
    h += &ops[1].scale_real(-GAMMA_E * field[1]);
    h += &ops[2].scale_real(-GAMMA_E * field[2]);
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NvParams {
    /// Zero-field splitting, rad/s.
    pub d_rad_per_s: f64,
    /// Longitudinal ¹⁵N hyperfine constant, rad/s.
    pub a_z_rad_per_s: f64,
    /// Angle between the applied field and the NV axis, radians.
    pub axis_angle_rad: f64,
}

impl Default for NvParams {
    fn default() -> Self {
        Self {
            d_rad_per_s: angular(2.88e9),
            a_z_rad_per_s: angular(3.1e6),
            axis_angle_rad: 35.3f64.to_radians(),
        }
    }
}

impl NvParams {
    /// Field of magnitude `b` applied at the configured angle to the NV axis,
    /// expressed in the NV frame (Z = NV axis, transverse part along X).
    pub fn field_at_angle(&self, b: f64) -> [f64; 3] {
        [b * self.axis_angle_rad.sin(), 0.0, b * self.axis_angle_rad.cos()]
    }
}

/// NV center (S = 1) with a ¹⁵N nucleus (I = 1/2); joint basis
/// |m_S⟩ ⊗ |m_I⟩, both descending.
#[derive(Clone, Debug)]
pub struct NvCenter {
    pub params: NvParams,
    electron: [ComplexMatrix; 3],
    sz_iz: ComplexMatrix,
    sz2: ComplexMatrix,
    label_op: ComplexMatrix,
}

impl NvCenter {
    pub fn new(params: NvParams) -> Self {
        let s = spin_operators(1.0).expect("spin 1");
        let i = spin_operators(0.5).expect("spin 1/2");
        let id_i = i.identity();
        let electron = [kron(&s.sx, &id_i), kron(&s.sy, &id_i), kron(&s.sz, &id_i)];
        let sz_iz = kron(&s.sz, &i.sz);
        let sz2 = electron[2].matmul(&electron[2]);
        let label_op = &electron[2] + &kron(&s.identity(), &i.sz).scale_real(0.1);
        Self { params, electron, sz_iz, sz2, label_op }
    }

    /// m_S² D − γ_e B_Z m_S + A_Z m_S m_I for a purely longitudinal field.
    pub fn diagonal_energy(&self, m_s: i32, two_m_i: i32, b_z: f64) -> f64 {
        let (ms, mi) = (m_s as f64, two_m_i as f64 / 2.0);
        ms * ms * self.params.d_rad_per_s - GAMMA_E * b_z * ms + self.params.a_z_rad_per_s * ms * mi
    }
}

impl Default for NvCenter {
    fn default() -> Self {
        Self::new(NvParams::default())
    }
}

impl SpinSystem for NvCenter {
    fn dim(&self) -> usize {
        6
    }

    fn hamiltonian(&self, field: [f64; 3]) -> ComplexMatrix {
        let mut h = self.sz2.scale_real(self.params.d_rad_per_s);
        h += &zeeman(&self.electron, field);
        h += &self.sz_iz.scale_real(self.params.a_z_rad_per_s);
        h
    }

    fn electron_operators(&self) -> &[ComplexMatrix; 3] {
        &self.electron
    }

    fn label_operator(&self, _field: [f64; 3]) -> ComplexMatrix {
        self.label_op.clone()
    }

    fn label(&self, _field: [f64; 3], _rank: usize, vector: &[Complex64]) -> LevelLabel {
        // dominant |m_S, m_I> component
        let k = (0..vector.len())
            .max_by(|&a, &b| vector[a].norm_sqr().total_cmp(&vector[b].norm_sqr()).then(b.cmp(&a)))
            .unwrap_or(0);
        LevelLabel::Nv { m_s: 1 - (k / 2) as i32, two_m_i: if k % 2 == 0 { 1 } else { -1 } }
    }

    fn field_warnings(&self, field: [f64; 3]) -> Vec<String> {
        let b = norm3(field);
        if !(1e-4..=1e-2).contains(&b) {
            vec![format!("|B0| = {b:e} T is outside the 0.1-10 mT range where the NV Hamiltonian applies")]
        } else {
            vec![]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiParams {
    /// Isotropic hyperfine constant, rad/s.
    pub a_rad_per_s: f64,
    /// Nuclear spin.
    pub nuclear_spin: f64,
}

impl Default for BiParams {
    fn default() -> Self {
        Self { a_rad_per_s: angular(1.48e9), nuclear_spin: 4.5 }
    }
}

/// Bismuth donor in silicon: S = 1/2 electron coupled to an I = 9/2
/// nucleus; joint basis |m_S⟩ ⊗ |m_I⟩, both descending.
#[derive(Clone, Debug)]
pub struct BismuthDonor {
    pub params: BiParams,
    nuclear: SpinOperatorSet,
    electron: [ComplexMatrix; 3],
    total: [ComplexMatrix; 3],
    hyperfine: ComplexMatrix,
}

impl BismuthDonor {
    pub fn new(params: BiParams) -> Result<Self> {
        let s = spin_operators(0.5)?;
        let i = spin_operators(params.nuclear_spin)?;
        let (id_s, id_i) = (s.identity(), i.identity());
        let electron = [kron(&s.sx, &id_i), kron(&s.sy, &id_i), kron(&s.sz, &id_i)];
        let nuc = [kron(&id_s, &i.sx), kron(&id_s, &i.sy), kron(&id_s, &i.sz)];
        let mut hyperfine = electron[0].matmul(&nuc[0]);
        hyperfine += &electron[1].matmul(&nuc[1]);
        hyperfine += &electron[2].matmul(&nuc[2]);
        let total = [&electron[0] + &nuc[0], &electron[1] + &nuc[1], &electron[2] + &nuc[2]];
        Ok(Self { params, nuclear: i, electron, total, hyperfine })
    }

    /// Number of states in the lower (F = I − 1/2) multiplet.
    pub fn lower_multiplet_size(&self) -> usize {
        self.nuclear.dim() - 1
    }

    /// Total angular momentum components F = I + S.
    pub fn total_operators(&self) -> &[ComplexMatrix; 3] {
        &self.total
    }

    fn quantization_axis(field: [f64; 3]) -> [f64; 3] {
        let b = norm3(field);
        if b > 0.0 {
            [field[0] / b, field[1] / b, field[2] / b]
        } else {
            [0.0, 0.0, 1.0]
        }
    }

    fn f_along(&self, axis: [f64; 3]) -> ComplexMatrix {
        let mut op = self.total[0].scale_real(axis[0]);
        op += &self.total[1].scale_real(axis[1]);
        op += &self.total[2].scale_real(axis[2]);
        op
    }
}

impl Default for BismuthDonor {
    fn default() -> Self {
        Self::new(BiParams::default()).expect("default Bi parameters")
    }
}

impl SpinSystem for BismuthDonor {
    fn dim(&self) -> usize {
        2 * self.nuclear.dim()
    }

    fn hamiltonian(&self, field: [f64; 3]) -> ComplexMatrix {
        let mut h = self.hyperfine.scale_real(self.params.a_rad_per_s);
        h += &zeeman(&self.electron, field);
        h
    }

    fn electron_operators(&self) -> &[ComplexMatrix; 3] {
        &self.electron
    }

    fn label_operator(&self, field: [f64; 3]) -> ComplexMatrix {
        self.f_along(Self::quantization_axis(field))
    }

    fn label(&self, field: [f64; 3], rank: usize, vector: &[Complex64]) -> LevelLabel {
        let i2 = self.nuclear.dim() as u32 - 1; // 2I
        let f = if rank < self.lower_multiplet_size() { (i2 - 1) / 2 } else { (i2 + 1) / 2 };
        let fz = self.f_along(Self::quantization_axis(field));
        let m_f = fz.sandwich(vector, vector).re.round() as i32;
        LevelLabel::Bi { f, m_f }
    }

    fn field_warnings(&self, field: [f64; 3]) -> Vec<String> {
        let b = norm3(field);
        if b > 0.05 {
            vec![format!("|B0| = {b:e} T is not small compared with A/γ_e (about 50 mT)")]
        } else {
            vec![]
        }
    }
}

/// One energy level: angular frequency, eigenvector column and label.
#[derive(Clone, Debug)]
pub struct Level {
    pub energy: f64,
    pub label: LevelLabel,
}

/// Diagonalized system at a given field.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub field: [f64; 3],
    pub eig: EigenDecomposition,
    pub labels: Vec<LevelLabel>,
}

impl LevelSet {
    pub fn energy(&self, k: usize) -> f64 {
        self.eig.values[k]
    }

    pub fn find(&self, label: LevelLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn levels(&self) -> Vec<Level> {
        self.labels
            .iter()
            .enumerate()
            .map(|(k, &label)| Level { energy: self.eig.values[k], label })
            .collect()
    }
}

/// Diagonalize `system` at `field` and attach quantum-number labels.
pub fn solve_levels<S: SpinSystem + ?Sized>(system: &S, field: [f64; 3]) -> Result<LevelSet> {
    let h = system.hamiltonian(field);
    let mut eig = hermitian_eig(&h)?;
    // degenerate clusters (zero field) get rotated onto label eigenstates
    eig.resolve_degeneracies(&system.label_operator(field), 1e-9 * h.max_abs().max(1.0))?;
    let labels = (0..eig.dim()).map(|k| system.label(field, k, &eig.vector(k))).collect();
    Ok(LevelSet { field, eig, labels })
}
