//! CSV and JSON writers for ensemble results.

use std::io::Write;

use serde::Serialize;

use super::ensemble::{EnsembleStats, Exclusion, Method, Snapshot};
use crate::dynamics::ModelParams;
use crate::error::Result;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

fn hypothesis(spin: bool) -> &'static str {
    if spin {
        "spin"
    } else {
        "no_spin"
    }
}

fn selected<'a>(stats: &'a EnsembleStats, times_s: &[f64]) -> Vec<&'a Snapshot> {
    let mut out: Vec<&Snapshot> = times_s.iter().filter_map(|&t| stats.snapshot_near(t)).collect();
    out.dedup_by(|a, b| a.t_s == b.t_s);
    out
}

/// ζ histogram samples at the snapshots nearest `times_s`:
/// `t_s,zeta,hypothesis,eta`.
pub fn write_zeta_samples<W: Write>(runs: &[EnsembleStats], times_s: &[f64], mut w: W) -> Result<()> {
    writeln!(w, "t_s,zeta,hypothesis,eta")?;
    for r in runs {
        for s in selected(r, times_s) {
            for (spin, zs) in [(true, &s.zeta_spin), (false, &s.zeta_no_spin)] {
                for z in zs {
                    writeln!(w, "{:e},{z:e},{},{}", s.t_s, hypothesis(spin), r.params.eta)?;
                }
            }
        }
    }
    Ok(())
}

/// Posterior samples: `t_s,p_spin,hypothesis,eta`.
pub fn write_posterior_samples<W: Write>(runs: &[EnsembleStats], times_s: &[f64], mut w: W) -> Result<()> {
    writeln!(w, "t_s,p_spin,hypothesis,eta")?;
    for r in runs {
        for s in selected(r, times_s) {
            for (spin, ps) in [(true, &s.p_spin_given_spin), (false, &s.p_spin_given_no_spin)] {
                for p in ps {
                    writeln!(w, "{:e},{p:e},{},{}", s.t_s, hypothesis(spin), r.params.eta)?;
                }
            }
        }
    }
    Ok(())
}

/// Error curves for one or more efficiencies:
/// `t_s,error_threshold_analytic,error_threshold_empirical,error_bayes_empirical,eta`.
pub fn write_error_curves<W: Write>(runs: &[EnsembleStats], mut w: W) -> Result<()> {
    writeln!(w, "t_s,error_threshold_analytic,error_threshold_empirical,error_bayes_empirical,eta")?;
    for r in runs {
        for c in &r.curve {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{}",
                c.t_s, c.error_threshold_analytic, c.error_threshold_empirical, c.error_bayes_empirical, r.params.eta
            )?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub eta: f64,
    pub params: ModelParams,
    pub params_hash: String,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_used: usize,
    pub exclusions: Vec<Exclusion>,
    pub dt_s: f64,
    pub steps: usize,
    pub tau1_s: f64,
    pub duration_s: f64,
    pub snapshot_times_s: Vec<f64>,
    /// First time after which each error curve stays at or below 1%.
    pub time_to_1pct_error_s: TimeToError,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TimeToError {
    pub threshold_analytic: Option<f64>,
    pub threshold_empirical: Option<f64>,
    pub bayes_empirical: Option<f64>,
}

impl From<&EnsembleStats> for RunSummary {
    fn from(s: &EnsembleStats) -> Self {
        Self {
            eta: s.params.eta,
            params: s.params,
            params_hash: s.params.hash(),
            seed: s.seed,
            trials_requested: s.trials_requested,
            trials_used: s.trials_used,
            exclusions: s.exclusions.clone(),
            dt_s: s.dt_s,
            steps: s.steps,
            tau1_s: s.tau1_s,
            duration_s: s.steps as f64 * s.dt_s,
            snapshot_times_s: s.snapshots.iter().map(|x| x.t_s).collect(),
            time_to_1pct_error_s: TimeToError {
                threshold_analytic: s.time_to_error(Method::ThresholdAnalytic, 0.01),
                threshold_empirical: s.time_to_error(Method::ThresholdEmpirical, 0.01),
                bayes_empirical: s.time_to_error(Method::BayesEmpirical, 0.01),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: serde_json::Value,
    pub files: Vec<String>,
    pub runs: Vec<RunSummary>,
}

impl Manifest {
    pub fn new(config: serde_json::Value, runs: &[EnsembleStats], files: Vec<String>) -> Self {
        Self {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            files,
            runs: runs.iter().map(RunSummary::from).collect(),
        }
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }
}
