//! Run configuration: strict JSON schema, presets and resolution into
//! model parameters.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::device::{NanowireGeometry, ResonatorParams};
use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::numerics::constants::{angular, ELEMENTARY_CHARGE};
use crate::spin::{BiParams, NvParams};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinSystemKind {
    Nv,
    Bi,
    /// Bare two-level spin; only the model parameters matter.
    TwoLevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Nv,
    Bi,
    Sim,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nv" => Ok(Preset::Nv),
            "bi" => Ok(Preset::Bi),
            "sim" => Ok(Preset::Sim),
            _ => Err(Error::config("preset", format!("unknown preset `{s}` (expected nv, bi or sim)"))),
        }
    }
}

/// Wire cross-section and spin depth: the figure values (10 nm thick,
/// spin 15 nm below) or the text recommendation (15 nm thick, 20 nm).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryVariant {
    Figure,
    Prose,
}

impl FromStr for GeometryVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure" => Ok(GeometryVariant::Figure),
            "prose" => Ok(GeometryVariant::Prose),
            _ => Err(Error::config("geometry", format!("unknown geometry `{s}` (expected figure or prose)"))),
        }
    }
}

/// A span of model time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Duration {
    /// In units of τ₁ of the resolved parameters.
    Tau1(f64),
    S(f64),
}

impl Duration {
    pub fn seconds(&self, tau1: f64) -> f64 {
        match *self {
            Duration::Tau1(x) => x * tau1,
            Duration::S(x) => x,
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Duration::Tau1(x) | Duration::S(x) => x,
        }
    }
}

impl FromStr for Duration {
    type Err = Error;
    /// `20tau1`, `5e-3s` or a bare `0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config("duration", format!("cannot parse `{s}` (expected e.g. 20tau1 or 5e-3s)"));
        let d = if let Some(v) = s.strip_suffix("tau1") {
            Duration::Tau1(v.trim().parse().map_err(|_| bad())?)
        } else if let Some(v) = s.strip_suffix('s') {
            Duration::S(v.trim().parse().map_err(|_| bad())?)
        } else if s.parse::<f64>().ok() == Some(0.0) {
            Duration::S(0.0)
        } else {
            return Err(bad());
        };
        if !(d.value() >= 0.0 && d.value().is_finite()) {
            return Err(Error::config("duration", "must be finite and non-negative"));
        }
        Ok(d)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Duration::Tau1(x) => write!(f, "{x}tau1"),
            Duration::S(x) => write!(f, "{x}s"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorConfig {
    pub omega_r_rad_per_s: f64,
    pub z_r_ohm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldMapConfig {
    pub half_width_m: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSweepConfig {
    pub b_min_t: f64,
    pub b_max_t: f64,
    pub points: usize,
    /// Field direction in the spin frame; normalized on use.
    pub direction: [f64; 3],
}

impl LevelSweepConfig {
    pub fn fields(&self) -> Vec<f64> {
        if self.points <= 1 || self.b_max_t == self.b_min_t {
            return vec![self.b_min_t];
        }
        let step = (self.b_max_t - self.b_min_t) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.b_min_t + k as f64 * step).collect()
    }

    pub fn unit_direction(&self) -> Result<[f64; 3]> {
        let d = self.direction;
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::config("levels.direction", "must be a non-zero vector"));
        }
        Ok([d[0] / n, d[1] / n, d[2] / n])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: SpinSystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nv: Option<NvParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bi: Option<BiParams>,
    pub resonator: ResonatorConfig,
    pub geometry: NanowireGeometry,
    /// Spin position in the wire cross-section frame.
    pub spin_position_m: [f64; 2],
    pub field_map: FieldMapConfig,
    pub levels: LevelSweepConfig,
    pub model: ModelParams,
    /// Recompute β from the other parameters so that |α| = |α|_sat;
    /// the β fields of `model` are then ignored.
    pub saturating_drive: bool,
    pub seed: u64,
    pub trials: usize,
    pub eta_list: Vec<f64>,
    pub duration: Duration,
    /// Integration step; default 0.01 / fastest effective rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    pub prior_spin: f64,
    /// ζ histogram times.
    pub zeta_snapshots_tau1: Vec<f64>,
    /// Posterior histogram times.
    pub posterior_snapshots_tau1: Vec<f64>,
    /// Error-curve sample spacing.
    pub curve_spacing_tau1: f64,
    pub out_dir: String,
}

const NM: f64 = 1e-9;

fn wire(variant: GeometryVariant) -> (NanowireGeometry, [f64; 2]) {
    let (thickness, depth) = match variant {
        GeometryVariant::Figure => (10.0 * NM, 15.0 * NM),
        GeometryVariant::Prose => (15.0 * NM, 20.0 * NM),
    };
    let geom = NanowireGeometry {
        width_m: 20.0 * NM,
        thickness_m: thickness,
        length_m: 250.0 * NM,
        sheet_resistance_ohm: 4.5,
        gap_j: 230e-6 * ELEMENTARY_CHARGE,
        temperature_k: 0.010,
    };
    (geom, [0.0, -(0.5 * thickness + depth)])
}

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        Self::preset_with_geometry(preset, GeometryVariant::Figure)
    }

    pub fn preset_with_geometry(preset: Preset, variant: GeometryVariant) -> Self {
        let (geometry, spin_position_m) = wire(variant);
        let (system, resonator, model) = match preset {
            Preset::Nv => (
                SpinSystemKind::Nv,
                ResonatorConfig { omega_r_rad_per_s: angular(2.9e9), z_r_ohm: 15.3 },
                ModelParams::nv(),
            ),
            Preset::Bi => (
                SpinSystemKind::Bi,
                ResonatorConfig { omega_r_rad_per_s: angular(7.3e9), z_r_ohm: 26.5 },
                ModelParams::bi(),
            ),
            Preset::Sim => (
                SpinSystemKind::TwoLevel,
                ResonatorConfig { omega_r_rad_per_s: angular(2.9e9), z_r_ohm: 15.3 },
                ModelParams::sim(),
            ),
        };
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            system,
            nv: (system == SpinSystemKind::Nv).then(NvParams::default),
            bi: (system == SpinSystemKind::Bi).then(BiParams::default),
            resonator,
            geometry,
            spin_position_m,
            field_map: FieldMapConfig { half_width_m: 60.0 * NM, points: 61 },
            levels: LevelSweepConfig { b_min_t: 0.0, b_max_t: 10e-3, points: 201, direction: [0.0, 0.0, 1.0] },
            model,
            saturating_drive: true,
            seed: 1,
            trials: 3000,
            eta_list: vec![model.eta],
            duration: Duration::Tau1(20.0),
            dt_s: None,
            prior_spin: 0.5,
            zeta_snapshots_tau1: vec![20.0],
            posterior_snapshots_tau1: vec![0.2, 0.4, 2.0, 4.0, 6.0, 12.0],
            curve_spacing_tau1: 0.05,
            out_dir: "out".into(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {} (expected {CONFIG_SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let scoped = |prefix: &str, r: Result<()>| {
            r.map_err(|e| match e {
                Error::InvalidParameter { name, reason } => Error::config(format!("{prefix}.{name}"), reason),
                other => other,
            })
        };
        scoped("geometry", self.geometry.validate())?;
        scoped("resonator", self.resonator().validate())?;
        scoped("model", self.model_params().validate())?;
        if self.eta_list.is_empty() {
            return Err(Error::config("eta_list", "must not be empty"));
        }
        for (k, &eta) in self.eta_list.iter().enumerate() {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::config(format!("eta_list[{k}]"), "must lie in (0, 1]"));
            }
        }
        if !(self.prior_spin > 0.0 && self.prior_spin < 1.0) {
            return Err(Error::config("prior_spin", "must lie strictly between 0 and 1"));
        }
        if let Some(dt) = self.dt_s {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::config("dt_s", "must be positive"));
            }
        }
        let d = self.duration.value();
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::config("duration", "must be finite and non-negative"));
        }
        if !(self.curve_spacing_tau1 > 0.0) {
            return Err(Error::config("curve_spacing_tau1", "must be positive"));
        }
        for (name, list) in [("zeta_snapshots_tau1", &self.zeta_snapshots_tau1), ("posterior_snapshots_tau1", &self.posterior_snapshots_tau1)] {
            if list.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return Err(Error::config(name, "times must be positive"));
            }
        }
        if !(self.field_map.half_width_m > 0.0) || self.field_map.points < 2 {
            return Err(Error::config("field_map", "needs a positive half width and at least 2 points"));
        }
        if self.levels.b_max_t < self.levels.b_min_t || self.levels.b_min_t < 0.0 {
            return Err(Error::config("levels", "need 0 <= b_min_t <= b_max_t"));
        }
        self.levels.unit_direction()?;
        match self.system {
            SpinSystemKind::Nv if self.bi.is_some() => Err(Error::config("bi", "given for an nv system")),
            SpinSystemKind::Bi if self.nv.is_some() => Err(Error::config("nv", "given for a bi system")),
            SpinSystemKind::TwoLevel if self.nv.is_some() || self.bi.is_some() => {
                Err(Error::config("system", "two_level takes no nv/bi parameters"))
            }
            _ => Ok(()),
        }
    }

    /// Model parameters with the drive resolved.
    pub fn model_params(&self) -> ModelParams {
        let mut p = self.model;
        if self.saturating_drive {
            p.set_saturating_drive();
        }
        p
    }

    /// Model parameters at one efficiency of the list.
    pub fn model_at_eta(&self, eta: f64) -> ModelParams {
        let mut p = self.model_params();
        p.eta = eta;
        p
    }

    pub fn resonator(&self) -> ResonatorParams {
        ResonatorParams {
            omega_r_rad_per_s: self.resonator.omega_r_rad_per_s,
            z_r_ohm: self.resonator.z_r_ohm,
            kappa_per_s: self.model.kappa_per_s,
            kappa1_per_s: self.model.kappa1_per_s,
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.duration.seconds(self.model_params().tau1())
    }

    pub fn dt(&self, p: &ModelParams) -> f64 {
        self.dt_s.unwrap_or_else(|| p.default_dt())
    }
}
