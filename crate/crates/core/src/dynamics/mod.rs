//! Open-system dynamics: the full spin ⊗ cavity master equation, the
//! adiabatically eliminated spin model and the conditioned stochastic
//! master equation that produces homodyne records.

pub mod effective;
pub mod full;
pub mod lindblad;
pub mod params;
pub mod sme;

pub use effective::{
    bloch_vector, effective_spin_generator, steady_alpha, steady_sigma_minus, EffectiveGenerator, MeasurementOperator,
};
pub use full::{lindblad_step_full, DensityMatrix, FullModel};
pub use lindblad::Lindbladian;
pub use params::ModelParams;
pub use sme::{
    generate_record, step_grid, write_record_csv, HomodyneRecord, Noise, RecordSidecar, SmeStepper, Trajectory,
    TrajectoryOptions,
};
