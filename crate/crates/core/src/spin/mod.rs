//! NV-center and bismuth-donor spin Hamiltonians, their field-dependent
//! eigenstructure, transition matrix elements and the spin–resonator
//! coupling constant.

pub mod operators;
pub mod systems;
pub mod transitions;

pub use operators::{spin_operators, SpinOperatorSet};
pub use systems::{solve_levels, BiParams, BismuthDonor, LevelLabel, LevelSet, NvCenter, NvParams, SpinSystem};
pub use transitions::{
    coupling_constant, labeled_transition, level_sweep, resonance_field_search, selected_frequency,
    transition_elements, transitions_from, LevelSweep, PairSelector, TransitionPair,
};

/// Levels the NV preset works with: |mS=0, mI=+1/2⟩ → |mS=−1, mI=+1/2⟩.
pub const NV_PAIR: PairSelector = PairSelector {
    lower: LevelLabel::Nv { m_s: 0, two_m_i: 1 },
    upper: LevelLabel::Nv { m_s: -1, two_m_i: 1 },
};

/// Bi:Si transition that tunes down to 7.3 GHz near 3 mT with the Zeeman
/// term written as −γ_e B·S, γ_e > 0. It is the field-reversed image of
/// |F=4, mF=−4⟩ → |F=5, mF=−5⟩ and has the same matrix elements.
pub const BI_PAIR: PairSelector = PairSelector {
    lower: LevelLabel::Bi { f: 4, m_f: 4 },
    upper: LevelLabel::Bi { f: 5, m_f: 5 },
};
