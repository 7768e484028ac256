//! Command-line front end: design, levels, simulate, ensemble.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{Duration, GeometryVariant, Preset, RunConfig, SpinSystemKind};
use crate::detection::{
    bayes_filter, integrate_signal, posterior_cadence, run_ensemble, write_error_curves, write_posterior_samples,
    write_zeta_samples, EnsembleSpec, EnsembleStats, Manifest,
};
use crate::device::{
    field_magnitude, kinetic_inductance, measurement_time_tau1, rect_wire_field, write_field_map, zero_point_current,
    ResonatorParams,
};
use crate::dynamics::{generate_record, write_record_csv, TrajectoryOptions};
use crate::error::{Error, Result};
use crate::numerics::constants::hertz;
use crate::numerics::RngStream;
use crate::spin::{
    coupling_constant, labeled_transition, level_sweep, resonance_field_search, solve_levels, BismuthDonor,
    NvCenter, PairSelector, SpinSystem, BI_PAIR, NV_PAIR,
};

#[derive(Debug, Parser)]
#[command(name = "spindetect", version, about = "Single-spin detection simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Device chain: zero-point current, wire field, coupling, rates.
    Design(CommonArgs),
    /// Energy levels versus applied field.
    Levels(CommonArgs),
    /// One spin-present and one spin-absent record with ζ and p_spin traces.
    Simulate(CommonArgs),
    /// Monte Carlo error curves and histograms.
    Ensemble(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; overrides --preset.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// nv, bi or sim (default sim).
    #[arg(long)]
    pub preset: Option<String>,
    /// Wire geometry of the preset: figure or prose.
    #[arg(long)]
    pub geometry: Option<String>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,
    /// Comma-separated efficiencies.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
    /// e.g. 20tau1 or 5e-3s.
    #[arg(long)]
    pub duration: Option<String>,
    /// Integration step, s.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Resonator impedance, Ω.
    #[arg(long)]
    pub zr: Option<f64>,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    /// Base config from --config or --preset, with flag overrides applied.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, preset) => {
                let preset: Preset = preset.as_deref().unwrap_or("sim").parse()?;
                let geometry: GeometryVariant = self.geometry.as_deref().unwrap_or("figure").parse()?;
                RunConfig::preset_with_geometry(preset, geometry)
            }
        };
        if self.config.is_some() && self.geometry.is_some() {
            return Err(Error::config("geometry", "only applies to presets; set it in the config file"));
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.trials {
            cfg.trials = n;
        }
        if let Some(etas) = &self.eta {
            cfg.eta_list = etas.clone();
        }
        if let Some(d) = &self.duration {
            cfg.duration = d.parse::<Duration>()?;
        }
        if let Some(dt) = self.dt {
            cfg.dt_s = Some(dt);
        }
        if let Some(zr) = self.zr {
            cfg.resonator.z_r_ohm = zr;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.display().to_string();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionReport {
    pub lower: String,
    pub upper: String,
    /// Field along the quantization axis at resonance, T.
    pub resonance_field_t: f64,
    pub frequency_hz: f64,
    pub element_abs: f64,
    pub g_rad_per_s: f64,
    pub g_over_2pi_hz: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatesReport {
    pub g_rad_per_s: f64,
    pub g_over_2pi_hz: f64,
    pub kappa_per_s: f64,
    pub gamma_phi_per_s: f64,
    pub eta: f64,
    pub gamma_p_per_s: f64,
    pub purcell_time_s: f64,
    pub gamma_2_per_s: f64,
    pub tau1_s: f64,
    pub tau_eta_s: f64,
}

impl RatesReport {
    fn new(g: f64, kappa: f64, gamma_phi: f64, gamma_dec: f64, eta: f64) -> Self {
        let m = measurement_time_tau1(g, kappa, gamma_phi, gamma_dec, eta);
        Self {
            g_rad_per_s: g,
            g_over_2pi_hz: hertz(g),
            kappa_per_s: kappa,
            gamma_phi_per_s: gamma_phi,
            eta,
            gamma_p_per_s: m.gamma_p,
            purcell_time_s: 1.0 / m.gamma_p,
            gamma_2_per_s: m.gamma_2,
            tau1_s: m.tau1,
            tau_eta_s: m.tau_eta,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignReport {
    pub system: SpinSystemKind,
    pub resonator: ResonatorParams,
    pub quality_factor: f64,
    pub delta_i_a: f64,
    pub kinetic_inductance_h: f64,
    pub spin_position_m: [f64; 2],
    pub delta_b_t: [f64; 3],
    pub delta_b_abs_t: f64,
    /// Transition at resonance with δB perpendicular to the quantization
    /// axis; absent for a bare two-level system.
    pub transition: Option<TransitionReport>,
    /// Rates from the coupling computed along the device chain.
    pub device_rates: Option<RatesReport>,
    /// Rates from the configured model parameters.
    pub model_rates: RatesReport,
    pub alpha_sat: f64,
    pub beta_sat_sqrt_per_s: f64,
    pub warnings: Vec<String>,
}

fn spin_system(cfg: &RunConfig) -> Result<Option<(Box<dyn SpinSystem>, PairSelector, (f64, f64))>> {
    Ok(match cfg.system {
        SpinSystemKind::Nv => Some((Box::new(NvCenter::new(cfg.nv.unwrap_or_default())), NV_PAIR, (0.0, 5e-3))),
        SpinSystemKind::Bi => Some((Box::new(BismuthDonor::new(cfg.bi.unwrap_or_default())?), BI_PAIR, (2e-3, 6e-3))),
        SpinSystemKind::TwoLevel => None,
    })
}

pub fn design_report(cfg: &RunConfig) -> Result<DesignReport> {
    let res = cfg.resonator();
    let delta_i = zero_point_current(&res);
    let [x, y] = cfg.spin_position_m;
    let delta_b = rect_wire_field(&cfg.geometry, delta_i, x, y)
        .map_err(|e| Error::config("spin_position_m", e.to_string()))?;
    let delta_b_abs = field_magnitude(delta_b);
    let p = cfg.model_params();
    let mut warnings = cfg.geometry.warnings();
    warnings.extend(p.warnings());

    let mut transition = None;
    let mut device_rates = None;
    if let Some((system, pair, bracket)) = spin_system(cfg)? {
        let z = [0.0, 0.0, 1.0];
        let b0 = resonance_field_search(system.as_ref(), pair, z, res.omega_r_rad_per_s, bracket)?;
        let field = [0.0, 0.0, b0];
        warnings.extend(system.field_warnings(field));
        let levels = solve_levels(system.as_ref(), field)?;
        let t = labeled_transition(system.as_ref(), &levels, pair.lower, pair.upper)
            .ok_or_else(|| Error::invalid("pair", "transition levels not found at resonance"))?;
        let g = coupling_constant(&t, [delta_b_abs, 0.0, 0.0]);
        device_rates = Some(RatesReport::new(g, p.kappa_per_s, p.gamma_phi_per_s, p.gamma_dec_per_s, p.eta));
        transition = Some(TransitionReport {
            lower: pair.lower.to_string(),
            upper: pair.upper.to_string(),
            resonance_field_t: b0,
            frequency_hz: t.frequency_hz(),
            element_abs: t.element_norm(),
            g_rad_per_s: g,
            g_over_2pi_hz: hertz(g),
        });
    }
    let p_sat = p.beta();
    Ok(DesignReport {
        system: cfg.system,
        resonator: res,
        quality_factor: res.quality_factor(),
        delta_i_a: delta_i,
        kinetic_inductance_h: kinetic_inductance(&cfg.geometry),
        spin_position_m: cfg.spin_position_m,
        delta_b_t: delta_b,
        delta_b_abs_t: delta_b_abs,
        transition,
        device_rates,
        model_rates: RatesReport::new(p.g_rad_per_s, p.kappa_per_s, p.gamma_phi_per_s, p.gamma_dec_per_s, p.eta),
        alpha_sat: crate::device::saturation_amplitude(p.g_rad_per_s, p.gamma_1(), p.gamma_2()),
        beta_sat_sqrt_per_s: if cfg.saturating_drive { p_sat.norm() } else { f64::NAN },
        warnings,
    })
}

fn create(dir: &Path, name: &str, written: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    written.push(path);
    Ok(BufWriter::new(f))
}

fn prepare_out(cfg: &RunConfig) -> Result<(PathBuf, Vec<PathBuf>)> {
    let dir = PathBuf::from(&cfg.out_dir);
    fs::create_dir_all(&dir).map_err(|e| Error::config("out_dir", format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    let mut w = create(&dir, "config.json", &mut written)?;
    writeln!(w, "{}", cfg.to_json())?;
    w.flush()?;
    Ok((dir, written))
}

fn grid(half: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| -half + 2.0 * half * k as f64 / (n - 1) as f64).collect()
}

pub fn cmd_design(cfg: &RunConfig) -> Result<(DesignReport, Vec<PathBuf>)> {
    let report = design_report(cfg)?;
    let (dir, mut written) = prepare_out(cfg)?;
    let mut w = create(&dir, "design.json", &mut written)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    let xs = grid(cfg.field_map.half_width_m, cfg.field_map.points);
    let mut w = create(&dir, "field_map.csv", &mut written)?;
    write_field_map(&cfg.geometry, report.delta_i_a, &xs, &xs, &mut w)?;
    w.flush()?;
    Ok((report, written))
}

pub fn cmd_levels(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let Some((system, _, _)) = spin_system(cfg)? else {
        return Err(Error::config("system", "levels needs an nv or bi spin system"));
    };
    let sweep = level_sweep(system.as_ref(), cfg.levels.unit_direction()?, &cfg.levels.fields())?;
    let (dir, mut written) = prepare_out(cfg)?;
    let mut w = create(&dir, "levels.csv", &mut written)?;
    sweep.write_csv(&mut w)?;
    w.flush()?;
    Ok(written)
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = cfg.model_at_eta(cfg.eta_list[0]);
    p.validate()?;
    let dt = cfg.dt(&p);
    let duration = cfg.duration.seconds(p.tau1());
    let cadence = posterior_cadence(p.tau1(), dt);
    let opts = TrajectoryOptions { sample_every: cadence, ..TrajectoryOptions::default() };
    let (spin, traj_s) =
        generate_record(&p, duration, dt, &mut RngStream::with_stream(cfg.seed, 0), true, &opts)?;
    let (none, traj_n) =
        generate_record(&p, duration, dt, &mut RngStream::with_stream(cfg.seed, 1), false, &opts)?;
    let post_s = bayes_filter(&spin, &p, cfg.prior_spin, cadence)?;
    let post_n = bayes_filter(&none, &p, cfg.prior_spin, cadence)?;

    let (dir, mut written) = prepare_out(cfg)?;
    for (name, rec, traj) in [("record_spin", &spin, &traj_s), ("record_no_spin", &none, &traj_n)] {
        let mut w = create(&dir, &format!("{name}.csv"), &mut written)?;
        write_record_csv(rec, traj, &mut w)?;
        w.flush()?;
        let mut w = create(&dir, &format!("{name}.json"), &mut written)?;
        serde_json::to_writer_pretty(&mut w, &rec.sidecar())?;
        writeln!(w)?;
        w.flush()?;
    }

    let mut w = create(&dir, "zeta.csv", &mut written)?;
    writeln!(w, "t_s,zeta_spin,zeta_no_spin")?;
    let n = spin.dy.len();
    if n > 0 {
        let mut steps: Vec<usize> = (1..=n / cadence).map(|k| k * cadence).collect();
        if steps.last() != Some(&n) {
            steps.push(n);
        }
        let zs = integrate_signal(&spin, &steps)?;
        let zn = integrate_signal(&none, &steps)?;
        for ((t, a), b) in zs.times_s.iter().zip(&zs.zeta).zip(&zn.zeta) {
            writeln!(w, "{t:e},{a:e},{b:e}")?;
        }
    }
    w.flush()?;

    let mut w = create(&dir, "posterior.csv", &mut written)?;
    writeln!(w, "t_s,p_spin_spin_record,p_spin_no_spin_record")?;
    for ((t, a), b) in post_s.times_s.iter().zip(&post_s.p_spin).zip(&post_n.p_spin) {
        writeln!(w, "{t:e},{a:e},{b:e}")?;
    }
    w.flush()?;
    Ok(written)
}

/// Ensemble run for one efficiency of the config's list.
pub fn ensemble_spec(cfg: &RunConfig, eta: f64) -> EnsembleSpec {
    let p = cfg.model_at_eta(eta);
    let tau1 = p.tau1();
    let duration = cfg.duration.seconds(tau1);
    let mut spec = EnsembleSpec::new(p, cfg.trials, duration, cfg.seed);
    spec.dt_s = cfg.dt(&p);
    spec.prior_spin = cfg.prior_spin;
    spec.curve_every = ((cfg.curve_spacing_tau1 * tau1 / spec.dt_s).round() as usize).max(1);
    let mut snaps: Vec<f64> = cfg
        .zeta_snapshots_tau1
        .iter()
        .chain(&cfg.posterior_snapshots_tau1)
        .map(|t| t * tau1)
        .filter(|&t| t <= duration * (1.0 + 1e-12))
        .collect();
    snaps.sort_by(f64::total_cmp);
    snaps.dedup();
    spec.snapshot_times_s = snaps;
    spec
}

pub fn cmd_ensemble(cfg: &RunConfig) -> Result<(Vec<EnsembleStats>, Vec<PathBuf>)> {
    let mut runs = Vec::with_capacity(cfg.eta_list.len());
    for &eta in &cfg.eta_list {
        runs.push(run_ensemble(&ensemble_spec(cfg, eta))?);
    }
    let tau1 = cfg.model_params().tau1();
    let zeta_times: Vec<f64> = cfg.zeta_snapshots_tau1.iter().map(|t| t * tau1).collect();
    let post_times: Vec<f64> = cfg.posterior_snapshots_tau1.iter().map(|t| t * tau1).collect();

    let (dir, mut written) = prepare_out(cfg)?;
    let mut w = create(&dir, "fig5b.csv", &mut written)?;
    write_zeta_samples(&runs, &zeta_times, &mut w)?;
    w.flush()?;
    let mut w = create(&dir, "fig6.csv", &mut written)?;
    write_posterior_samples(&runs, &post_times, &mut w)?;
    w.flush()?;
    let mut w = create(&dir, "fig7.csv", &mut written)?;
    write_error_curves(&runs, &mut w)?;
    w.flush()?;

    let mut files: Vec<String> =
        written.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
    files.push("manifest.json".into());
    let manifest = Manifest::new(serde_json::to_value(cfg)?, &runs, files);
    let mut w = create(&dir, "manifest.json", &mut written)?;
    manifest.write(&mut w)?;
    w.flush()?;
    Ok((runs, written))
}

/// Run a parsed command line, writing a short summary to `out`.
pub fn run<W: Write>(cli: &Cli, mut out: W) -> Result<()> {
    let (args, name) = match &cli.command {
        Command::Design(a) => (a, "design"),
        Command::Levels(a) => (a, "levels"),
        Command::Simulate(a) => (a, "simulate"),
        Command::Ensemble(a) => (a, "ensemble"),
    };
    let cfg = args.resolve()?;
    let written = match &cli.command {
        Command::Design(_) => {
            let (report, written) = cmd_design(&cfg)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            written
        }
        Command::Levels(_) => cmd_levels(&cfg)?,
        Command::Simulate(_) => cmd_simulate(&cfg)?,
        Command::Ensemble(_) => {
            let (runs, written) = cmd_ensemble(&cfg)?;
            for r in &runs {
                writeln!(out, "eta={} trials={}/{} excluded={}", r.params.eta, r.trials_used, r.trials_requested, r.exclusions.len())?;
            }
            written
        }
    };
    for path in written {
        writeln!(out, "{name}: wrote {}", path.display())?;
    }
    Ok(())
}
