//! Conditioned two-level evolution under homodyne detection and the
//! records it emits.
//!
//! The step is a first-order completely positive (Kraus) form of the Itô
//! stochastic master equation. With L = c1·σ₋ the monitored part of the
//! homodyne operator and dy = √η⟨L + L†⟩dt + dW,
//!
//! ρ' ∝ MρM† + (1−η)LρL†dt + (γ_p − |c1|²)σ₋ρσ₊dt + γ_dec σ₋ρσ₊dt + (γ_φ/2)σ_zρσ_z dt,
//! M = 𝟙 − (iH + ½Σc†c)dt + √η L dy.
//!
//! Expanding to O(dt) reproduces the Euler–Maruyama update exactly, while
//! every step maps states to states.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::effective::{bloch_vector, coherence, effective_spin_generator, MeasurementOperator, GROUND};
use super::params::{ModelParams, STEP_LIMIT};
use crate::error::{Error, Result};
use crate::numerics::matrix::I;
use crate::numerics::{Mat2, RngStream};

pub const RECORD_SCHEMA_VERSION: u32 = 1;

/// Most negative eigenvalue tolerated before a trajectory is aborted.
pub const POSITIVITY_LIMIT: f64 = -1e-8;

/// Source of the measurement noise for one step.
pub enum Noise<'a> {
    /// Draw dW and emit the resulting dY.
    Generate(&'a mut RngStream),
    /// Use the given record increment dY.
    Filter(f64),
}

/// Precomputed single-step map for fixed parameters and dt.
#[derive(Clone, Debug)]
pub struct SmeStepper {
    dt: f64,
    eta: f64,
    sqrt_eta: f64,
    meas: MeasurementOperator,
    // 𝟙 − (iH + ½Σc†c)dt
    k: Mat2,
    // √η·c1, the only entry of √η L
    l01: Complex64,
    // rate feeding ρ₁₁ → ρ₀₀ outside the MρM† term
    unconditioned_decay: f64,
    half_dephasing: f64,
    bare_mean: f64,
}

impl SmeStepper {
    pub fn new(p: &ModelParams, dt: f64) -> Result<Self> {
        p.validate()?;
        let max_rate = p.max_rate_effective();
        if !(dt > 0.0 && dt.is_finite()) || dt * max_rate > STEP_LIMIT * (1.0 + 1e-9) {
            return Err(Error::StepTooLarge { dt, max_rate, limit: STEP_LIMIT });
        }
        let gen = effective_spin_generator(p);
        let mut cdc = Mat2::ZERO;
        for (_, c) in &gen.jumps {
            cdc = cdc + c.adjoint() * *c;
        }
        let k = Mat2::IDENTITY - (gen.hamiltonian.scale(I) + cdc.scale_real(0.5)).scale_real(dt);
        let meas = MeasurementOperator::new(p);
        let monitored = meas.c1.norm_sqr();
        let sqrt_eta = p.eta.sqrt();
        Ok(Self {
            dt,
            eta: p.eta,
            sqrt_eta,
            meas,
            k,
            l01: meas.c1 * sqrt_eta,
            unconditioned_decay: (1.0 - p.eta) * monitored + (p.gamma_p() - monitored) + p.gamma_dec_per_s,
            half_dephasing: 0.5 * p.gamma_phi_per_s,
            bare_mean: meas.bare_rate(p.eta) * dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn measurement(&self) -> &MeasurementOperator {
        &self.meas
    }

    /// Predicted record mean η⟨c_m + c_m†⟩dt for state ρ.
    #[inline]
    pub fn mean_increment(&self, rho: &Mat2) -> f64 {
        self.eta * self.meas.quadrature(coherence(rho)) * self.dt
    }

    /// Record mean with no spin present.
    pub fn bare_mean_increment(&self) -> f64 {
        self.bare_mean
    }

    /// Advance ρ by one step. Returns the new state and the record
    /// increment dY (generated, or echoed back in filtering mode).
    #[inline]
    pub fn step(&self, rho: &Mat2, noise: Noise<'_>, step: usize) -> Result<(Mat2, f64)> {
        let dt = self.dt;
        let signal = 2.0 * (self.meas.c1 * coherence(rho)).re;
        let (dy, d_y) = match noise {
            Noise::Generate(rng) => {
                let dw = rng.gaussian_increment(dt);
                let dy = self.sqrt_eta * signal * dt + dw;
                (dy, self.bare_mean + self.sqrt_eta * dy)
            }
            Noise::Filter(d_y) => ((d_y - self.bare_mean) / self.sqrt_eta, d_y),
        };

        let mut m = self.k;
        m.0[0][1] += self.l01 * dy;
        let mut next = m * *rho * m.adjoint();
        let r = &rho.0;
        next.0[0][0] += self.unconditioned_decay * dt * r[1][1].re;
        let deph = self.half_dephasing * dt;
        next.0[0][0] += deph * r[0][0];
        next.0[1][1] += deph * r[1][1];
        next.0[0][1] -= deph * r[0][1];
        next.0[1][0] -= deph * r[1][0];

        let mut next = next.hermitian_part();
        let tr = next.trace().re;
        next = next.scale_real(1.0 / tr);
        if !next.is_finite() || !d_y.is_finite() {
            return Err(Error::NonFinite { step, time: (step + 1) as f64 * dt });
        }
        let min_eigenvalue = next.min_eigenvalue();
        if min_eigenvalue < POSITIVITY_LIMIT {
            return Err(Error::Positivity { step, min_eigenvalue });
        }
        Ok((next, d_y))
    }
}

/// Measured homodyne increments with what is needed to regenerate them.
#[derive(Clone, Debug, PartialEq)]
pub struct HomodyneRecord {
    pub dt_s: f64,
    pub dy: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
    pub spin_present: bool,
    pub params: ModelParams,
    pub params_hash: String,
}

impl HomodyneRecord {
    pub fn duration(&self) -> f64 {
        self.dy.len() as f64 * self.dt_s
    }

    pub fn sidecar(&self) -> RecordSidecar {
        RecordSidecar {
            schema_version: RECORD_SCHEMA_VERSION,
            params: self.params,
            params_hash: self.params_hash.clone(),
            seed: self.seed,
            stream: self.stream,
            spin_present: self.spin_present,
            dt_s: self.dt_s,
            duration_s: self.duration(),
            steps: self.dy.len(),
        }
    }
}

/// JSON companion of a record CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordSidecar {
    pub schema_version: u32,
    pub params: ModelParams,
    pub params_hash: String,
    pub seed: u64,
    pub stream: u64,
    pub spin_present: bool,
    pub dt_s: f64,
    pub duration_s: f64,
    pub steps: usize,
}

impl RecordSidecar {
    /// Regenerate the record this sidecar describes.
    pub fn replay(&self) -> Result<(HomodyneRecord, Trajectory)> {
        if self.schema_version != RECORD_SCHEMA_VERSION {
            return Err(Error::config("schema_version", format!("unsupported version {}", self.schema_version)));
        }
        let opts = TrajectoryOptions { sample_every: 1, ..TrajectoryOptions::default() };
        let mut rng = RngStream::with_stream(self.seed, self.stream);
        let out = generate_steps(&self.params, self.steps, self.dt_s, &mut rng, self.spin_present, &opts)?;
        if out.0.params_hash != self.params_hash {
            return Err(Error::config("params_hash", "does not match the parameters"));
        }
        Ok(out)
    }
}

/// Sampled Bloch vector along a trajectory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    /// Step index after which each sample was taken.
    pub steps: Vec<usize>,
    pub bloch: Vec<[f64; 3]>,
    pub final_state: Option<Mat2>,
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectoryOptions {
    pub initial: Mat2,
    /// Store the Bloch vector every this many steps; 0 stores nothing.
    pub sample_every: usize,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self { initial: GROUND, sample_every: 0 }
    }
}

/// Number of steps and the step size actually used so that
/// steps·dt = duration exactly.
pub fn step_grid(duration: f64, dt: f64) -> Result<(usize, f64)> {
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(Error::invalid("duration", "must be finite and non-negative"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let n = (duration / dt).ceil() as usize;
    if n == 0 {
        return Ok((0, dt));
    }
    Ok((n, duration / n as f64))
}

/// Simulate `duration` of measurement with or without the spin.
pub fn generate_record(
    p: &ModelParams,
    duration: f64,
    dt: f64,
    rng: &mut RngStream,
    spin_present: bool,
    opts: &TrajectoryOptions,
) -> Result<(HomodyneRecord, Trajectory)> {
    let (steps, dt) = step_grid(duration, dt)?;
    generate_steps(p, steps, dt, rng, spin_present, opts)
}

pub fn generate_steps(
    p: &ModelParams,
    steps: usize,
    dt: f64,
    rng: &mut RngStream,
    spin_present: bool,
    opts: &TrajectoryOptions,
) -> Result<(HomodyneRecord, Trajectory)> {
    let stepper = SmeStepper::new(p, dt)?;
    let (seed, stream) = (rng.seed(), rng.stream());
    let mut dy = Vec::with_capacity(steps);
    let mut traj = Trajectory::default();
    if spin_present {
        let mut rho = opts.initial;
        for k in 0..steps {
            let (next, d_y) = stepper.step(&rho, Noise::Generate(rng), k)?;
            rho = next;
            dy.push(d_y);
            if opts.sample_every > 0 && (k + 1) % opts.sample_every == 0 {
                traj.steps.push(k + 1);
                traj.bloch.push(bloch_vector(&rho));
            }
        }
        traj.final_state = Some(rho);
    } else {
        let mean = stepper.bare_mean_increment();
        let sqrt_eta = p.eta.sqrt();
        for _ in 0..steps {
            dy.push(mean + sqrt_eta * rng.gaussian_increment(dt));
        }
    }
    let record = HomodyneRecord {
        dt_s: dt,
        dy,
        seed,
        stream,
        spin_present,
        params: *p,
        params_hash: p.hash(),
    };
    Ok((record, traj))
}

/// Record CSV: `t_s,dY,sigma_x,sigma_y,sigma_z`; t is the end of each
/// step and the Bloch columns are empty where no sample was stored.
pub fn write_record_csv<W: Write>(record: &HomodyneRecord, traj: &Trajectory, mut w: W) -> Result<()> {
    writeln!(w, "t_s,dY,sigma_x,sigma_y,sigma_z")?;
    let mut samples = traj.steps.iter().zip(&traj.bloch).peekable();
    for (k, d_y) in record.dy.iter().enumerate() {
        let t = (k + 1) as f64 * record.dt_s;
        match samples.peek() {
            Some((&s, b)) if s == k + 1 => {
                writeln!(w, "{t:e},{d_y:e},{:e},{:e},{:e}", b[0], b[1], b[2])?;
                samples.next();
            }
            _ => writeln!(w, "{t:e},{d_y:e},,,")?,
        }
    }
    Ok(())
}
