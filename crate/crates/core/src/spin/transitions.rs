use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::systems::{solve_levels, LevelLabel, LevelSet, SpinSystem};
use crate::error::{Error, Result};
use crate::numerics::constants::{hertz, GAMMA_E, TWO_PI};
use crate::numerics::{hermitian_eig, ComplexMatrix, EigenDecomposition};

/// A pair of levels |0⟩ (lower) and |1⟩ (upper) with the electron-spin
/// matrix element ⟨0|S|1⟩.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionPair {
    pub lower: usize,
    pub upper: usize,
    pub lower_label: Option<String>,
    pub upper_label: Option<String>,
    /// (E₁ − E₀)/ħ, rad/s.
    pub omega: f64,
    #[serde(serialize_with = "ser_c3")]
    pub element: [Complex64; 3],
}

fn ser_c3<S: serde::Serializer>(v: &[Complex64; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl TransitionPair {
    pub fn frequency_hz(&self) -> f64 {
        hertz(self.omega)
    }

    /// |⟨0|S|1⟩|
    pub fn element_norm(&self) -> f64 {
        self.element.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn pair_from(eig: &EigenDecomposition, ops: &[ComplexMatrix; 3], lower: usize, upper: usize) -> TransitionPair {
    let (v0, v1) = (eig.vector(lower), eig.vector(upper));
    TransitionPair {
        lower,
        upper,
        lower_label: None,
        upper_label: None,
        omega: eig.values[upper] - eig.values[lower],
        element: [ops[0].sandwich(&v0, &v1), ops[1].sandwich(&v0, &v1), ops[2].sandwich(&v0, &v1)],
    }
}

/// ⟨n₀|S|n₁⟩ for every ordered pair of levels with E₁ > E₀.
pub fn transitions_from(eig: &EigenDecomposition, ops: &[ComplexMatrix; 3]) -> Vec<TransitionPair> {
    let n = eig.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for lower in 0..n {
        for upper in (lower + 1)..n {
            if eig.values[upper] > eig.values[lower] {
                out.push(pair_from(eig, ops, lower, upper));
            }
        }
    }
    out
}

/// Diagonalize `h` and list the electron-spin matrix elements of all
/// upward transitions.
pub fn transition_elements(h: &ComplexMatrix, ops: &[ComplexMatrix; 3]) -> Result<Vec<TransitionPair>> {
    Ok(transitions_from(&hermitian_eig(h)?, ops))
}

/// Transition between two labeled levels of a solved system.
pub fn labeled_transition<S: SpinSystem + ?Sized>(
    system: &S,
    levels: &LevelSet,
    lower: LevelLabel,
    upper: LevelLabel,
) -> Option<TransitionPair> {
    let (a, b) = (levels.find(lower)?, levels.find(upper)?);
    let mut pair = pair_from(&levels.eig, system.electron_operators(), a, b);
    pair.lower_label = Some(lower.to_string());
    pair.upper_label = Some(upper.to_string());
    Some(pair)
}

/// g = |γ_e δB·⟨0|S|1⟩| in rad/s.
pub fn coupling_constant(pair: &TransitionPair, delta_b: [f64; 3]) -> f64 {
    let dot: Complex64 = pair.element.iter().zip(delta_b).map(|(z, b)| z * b).sum();
    GAMMA_E * dot.norm()
}

/// Which transition a resonance search follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSelector {
    pub lower: LevelLabel,
    pub upper: LevelLabel,
}

/// Transition angular frequency of the selected pair at field magnitude
/// `b` along `direction`. The sign is (E_upper − E_lower).
pub fn selected_frequency<S: SpinSystem + ?Sized>(
    system: &S,
    selector: PairSelector,
    direction: [f64; 3],
    b: f64,
) -> Result<f64> {
    let field = [b * direction[0], b * direction[1], b * direction[2]];
    let levels = solve_levels(system, field)?;
    let (lo, hi) = match (levels.find(selector.lower), levels.find(selector.upper)) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(Error::invalid(
                "pair",
                format!("levels {} / {} not found at {b:e} T", selector.lower, selector.upper),
            ))
        }
    };
    Ok(levels.energy(hi) - levels.energy(lo))
}

/// Accepted frequency mismatch of [`resonance_field_search`]: 2π·1 kHz.
pub const RESONANCE_TOL: f64 = TWO_PI * 1e3;

/// Field magnitude along `direction` (unit vector) within `bracket` at
/// which the selected transition frequency equals `omega_target`.
/// Bisection; the detuning must change sign over the bracket.
pub fn resonance_field_search<S: SpinSystem + ?Sized>(
    system: &S,
    selector: PairSelector,
    direction: [f64; 3],
    omega_target: f64,
    bracket: (f64, f64),
) -> Result<f64> {
    let detuning = |b: f64| selected_frequency(system, selector, direction, b).map(|w| w - omega_target);
    let (mut lo, mut hi) = bracket;
    let (mut f_lo, f_hi) = (detuning(lo)?, detuning(hi)?);
    if f_lo.abs() <= RESONANCE_TOL {
        return Ok(lo);
    }
    if f_hi.abs() <= RESONANCE_TOL {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Unbracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = detuning(mid)?;
        if f_mid.abs() <= RESONANCE_TOL || (hi - lo) < 1e-15 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Levels of a field sweep with labels carried by adiabatic continuation.
#[derive(Clone, Debug)]
pub struct LevelSweep {
    /// Field magnitudes, T.
    pub fields: Vec<f64>,
    /// Labels fixed at the first field point, by continued level index.
    pub labels: Vec<LevelLabel>,
    /// energies[step][level], rad/s, level index continued across steps.
    pub energies: Vec<Vec<f64>>,
}

/// Sweep the field magnitude along `direction`, continuing each level to
/// the eigenvector of maximum overlap with its previous-step state rather
/// than by energy rank, so crossings keep their labels.
pub fn level_sweep<S: SpinSystem + ?Sized>(system: &S, direction: [f64; 3], fields: &[f64]) -> Result<LevelSweep> {
    let mut energies = Vec::with_capacity(fields.len());
    let mut labels = Vec::new();
    let mut prev: Option<Vec<Vec<Complex64>>> = None;
    for &b in fields {
        let field = [b * direction[0], b * direction[1], b * direction[2]];
        let levels = solve_levels(system, field)?;
        let n = levels.eig.dim();
        let vectors: Vec<Vec<Complex64>> = (0..n).map(|k| levels.eig.vector(k)).collect();
        let order: Vec<usize> = match &prev {
            None => {
                labels = levels.labels.clone();
                (0..n).collect()
            }
            Some(prev_vecs) => assign_by_overlap(prev_vecs, &vectors),
        };
        energies.push(order.iter().map(|&k| levels.energy(k)).collect());
        prev = Some(order.iter().map(|&k| vectors[k].clone()).collect());
    }
    Ok(LevelSweep { fields: fields.to_vec(), labels, energies })
}

/// Greedy maximum-overlap assignment: order[i] is the new index continuing
/// old level i.
fn assign_by_overlap(prev: &[Vec<Complex64>], new: &[Vec<Complex64>]) -> Vec<usize> {
    let n = prev.len();
    let mut scores = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in new.iter().enumerate() {
            let ov: Complex64 = p.iter().zip(q).map(|(a, b)| a.conj() * b).sum();
            scores.push((ov.norm_sqr(), i, j));
        }
    }
    scores.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut order = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (_, i, j) in scores {
        if order[i] == usize::MAX && !taken[j] {
            order[i] = j;
            taken[j] = true;
        }
    }
    order
}

impl LevelSweep {
    /// CSV with header `B0_T,level_index,F_label_or_mS_mI,energy_over_h_Hz`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "B0_T,level_index,F_label_or_mS_mI,energy_over_h_Hz")?;
        for (b, row) in self.fields.iter().zip(&self.energies) {
            for (k, e) in row.iter().enumerate() {
                writeln!(w, "{b:e},{k},{},{:e}", self.labels[k], hertz(*e))?;
            }
        }
        Ok(())
    }
}
