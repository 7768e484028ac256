//! Monte Carlo ensembles of paired spin / no-spin records and their
//! discrimination-error curves.

use rayon::prelude::*;
use serde::Serialize;

use super::bayes::BayesFilter;
use super::signal::{analytic_error, Decision, SignalMeans};
use super::stats::{anderson_darling, mean_var, wilson_interval, AndersonDarling, Z95};
use crate::dynamics::effective::GROUND;
use crate::dynamics::{step_grid, ModelParams, Noise, SmeStepper};
use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// Smallest ensemble accepted for error estimation.
pub const MIN_TRIALS: usize = 100;

/// Fraction of failed trials above which a run is rejected.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.01;

// trials processed between sequential reductions
const CHUNK: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub params: ModelParams,
    pub trials: usize,
    pub duration_s: f64,
    pub dt_s: f64,
    pub seed: u64,
    pub prior_spin: f64,
    /// Steps between error-curve samples.
    pub curve_every: usize,
    /// Times at which full ζ and p_spin histograms are kept.
    pub snapshot_times_s: Vec<f64>,
}

impl EnsembleSpec {
    /// Defaults: the parameter set's dt, curve points every τ₁/20, prior ½.
    pub fn new(params: ModelParams, trials: usize, duration_s: f64, seed: u64) -> Self {
        let dt_s = params.default_dt();
        let curve_every = ((params.tau1() / 20.0 / dt_s).round() as usize).max(1);
        Self { params, trials, duration_s, dt_s, seed, prior_spin: 0.5, curve_every, snapshot_times_s: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exclusion {
    pub trial: usize,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t_s: f64,
    pub zeta_c: f64,
    pub error_threshold_analytic: f64,
    pub error_threshold_empirical: f64,
    pub threshold_ci95: (f64, f64),
    pub error_bayes_empirical: f64,
    pub bayes_ci95: (f64, f64),
    pub zeta_mean_spin: f64,
    pub zeta_var_spin: f64,
    pub zeta_mean_no_spin: f64,
    pub zeta_var_no_spin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub t_s: f64,
    pub zeta_spin: Vec<f64>,
    pub zeta_no_spin: Vec<f64>,
    pub p_spin_given_spin: Vec<f64>,
    pub p_spin_given_no_spin: Vec<f64>,
}

impl Snapshot {
    pub fn normality_spin(&self) -> Option<AndersonDarling> {
        anderson_darling(&self.zeta_spin)
    }

    pub fn normality_no_spin(&self) -> Option<AndersonDarling> {
        anderson_darling(&self.zeta_no_spin)
    }

    /// Mean ζ separation μ_spin − μ_nospin.
    pub fn separation(&self) -> f64 {
        mean_var(&self.zeta_spin).0 - mean_var(&self.zeta_no_spin).0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ThresholdAnalytic,
    ThresholdEmpirical,
    BayesEmpirical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub params: ModelParams,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_used: usize,
    pub exclusions: Vec<Exclusion>,
    pub dt_s: f64,
    pub steps: usize,
    pub tau1_s: f64,
    pub curve: Vec<CurvePoint>,
    pub snapshots: Vec<Snapshot>,
}

impl EnsembleStats {
    fn series(&self, m: Method) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.curve.iter().map(move |c| {
            let e = match m {
                Method::ThresholdAnalytic => c.error_threshold_analytic,
                Method::ThresholdEmpirical => c.error_threshold_empirical,
                Method::BayesEmpirical => c.error_bayes_empirical,
            };
            (c.t_s, e)
        })
    }

    /// Earliest sampled time from which the error stays at or below
    /// `level` until the end of the run.
    pub fn time_to_error(&self, m: Method, level: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.series(m).collect();
        let last_above = pts.iter().rposition(|&(_, e)| e > level);
        match last_above {
            None => pts.first().map(|p| p.0),
            Some(i) if i + 1 < pts.len() => Some(pts[i + 1].0),
            Some(_) => None,
        }
    }

    /// Snapshot closest to `t`.
    pub fn snapshot_near(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().min_by(|a, b| (a.t_s - t).abs().total_cmp(&(b.t_s - t).abs()))
    }
}

struct TrialOutput {
    // per event: (zeta_s, zeta_n, p_spin on spin record, p_spin on no-spin record)
    events: Vec<[f64; 4]>,
}

fn run_trial(
    p: &ModelParams,
    stepper: &SmeStepper,
    spec: &EnsembleSpec,
    steps: usize,
    dt: f64,
    event_steps: &[usize],
    trial: usize,
) -> Result<TrialOutput> {
    let mut rng_s = RngStream::with_stream(spec.seed, 2 * trial as u64);
    let mut rng_n = RngStream::with_stream(spec.seed, 2 * trial as u64 + 1);
    let mut f_s = BayesFilter::new(p, dt, spec.prior_spin)?;
    let mut f_n = BayesFilter::new(p, dt, spec.prior_spin)?;
    let bare = stepper.bare_mean_increment();
    let sqrt_eta = p.eta.sqrt();
    let mut rho = GROUND;
    let (mut sum_s, mut sum_n) = (0.0, 0.0);
    let mut events = Vec::with_capacity(event_steps.len());
    let mut next = event_steps.iter().peekable();
    for k in 0..steps {
        let (r, dy_s) = stepper.step(&rho, Noise::Generate(&mut rng_s), k)?;
        rho = r;
        let dy_n = bare + sqrt_eta * rng_n.gaussian_increment(dt);
        f_s.update(dy_s)?;
        f_n.update(dy_n)?;
        sum_s += dy_s;
        sum_n += dy_n;
        while next.peek() == Some(&&(k + 1)) {
            let t = (k + 1) as f64 * dt;
            events.push([sum_s / t.sqrt(), sum_n / t.sqrt(), f_s.p_spin(), f_n.p_spin()]);
            next.next();
        }
    }
    Ok(TrialOutput { events })
}

/// Simulate `spec.trials` paired records and aggregate both discriminators.
///
/// Trial k uses streams 2k (spin) and 2k+1 (no spin) of the master seed,
/// so results do not depend on the number of worker threads.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleStats> {
    let p = &spec.params;
    p.validate()?;
    if spec.trials < MIN_TRIALS {
        return Err(Error::invalid("trials", format!("{} is below the minimum of {MIN_TRIALS}", spec.trials)));
    }
    let (steps, dt) = step_grid(spec.duration_s, spec.dt_s)?;
    if steps == 0 {
        return Err(Error::invalid("duration", "must be positive for an ensemble"));
    }
    let stepper = SmeStepper::new(p, dt)?;

    let every = spec.curve_every.max(1);
    let mut curve_steps: Vec<usize> = (1..=steps / every).map(|k| k * every).collect();
    if curve_steps.last() != Some(&steps) {
        curve_steps.push(steps);
    }
    let snap_steps: Vec<usize> =
        spec.snapshot_times_s.iter().map(|t| ((t / dt).round() as usize).clamp(1, steps)).collect();
    let mut event_steps: Vec<usize> = curve_steps.iter().chain(&snap_steps).copied().collect();
    event_steps.sort_unstable();
    event_steps.dedup();
    let index_of = |s: usize| event_steps.binary_search(&s).expect("event step");

    let means = SignalMeans::new(p);
    let rules: Vec<_> = event_steps.iter().map(|&s| means.rule(s as f64 * dt)).collect();

    let n_ev = event_steps.len();
    let mut err_thr = vec![0usize; n_ev];
    let mut err_bayes = vec![0usize; n_ev];
    let mut sums = vec![[0.0f64; 4]; n_ev];
    let mut snaps: Vec<Snapshot> = snap_steps
        .iter()
        .map(|&s| Snapshot {
            t_s: s as f64 * dt,
            zeta_spin: vec![],
            zeta_no_spin: vec![],
            p_spin_given_spin: vec![],
            p_spin_given_no_spin: vec![],
        })
        .collect();
    let snap_idx: Vec<usize> = snap_steps.iter().map(|&s| index_of(s)).collect();
    let mut exclusions = Vec::new();
    let mut used = 0usize;

    let mut start = 0;
    while start < spec.trials {
        let end = (start + CHUNK).min(spec.trials);
        let outs: Vec<Result<TrialOutput>> = (start..end)
            .into_par_iter()
            .map(|k| run_trial(p, &stepper, spec, steps, dt, &event_steps, k))
            .collect();
        for (k, out) in (start..end).zip(outs) {
            let out = match out {
                Ok(o) => o,
                Err(e) => {
                    exclusions.push(Exclusion { trial: k, reason: e.to_string() });
                    continue;
                }
            };
            used += 1;
            for (j, ev) in out.events.iter().enumerate() {
                let [zs, zn, ps, pn] = *ev;
                err_thr[j] += (rules[j].classify(zs) != Decision::Spin) as usize;
                err_thr[j] += (rules[j].classify(zn) != Decision::NoSpin) as usize;
                err_bayes[j] += (ps <= 0.5) as usize;
                err_bayes[j] += (pn > 0.5) as usize;
                let s = &mut sums[j];
                s[0] += zs;
                s[1] += zs * zs;
                s[2] += zn;
                s[3] += zn * zn;
            }
            for (snap, &j) in snaps.iter_mut().zip(&snap_idx) {
                let [zs, zn, ps, pn] = out.events[j];
                snap.zeta_spin.push(zs);
                snap.zeta_no_spin.push(zn);
                snap.p_spin_given_spin.push(ps);
                snap.p_spin_given_no_spin.push(pn);
            }
        }
        start = end;
    }

    if exclusions.len() as f64 > MAX_EXCLUDED_FRACTION * spec.trials as f64 {
        return Err(Error::TooManyExclusions { excluded: exclusions.len(), total: spec.trials });
    }

    let tau1 = p.tau1();
    let n = used as f64;
    let var = |s: f64, s2: f64| (s2 - s * s / n) / (n - 1.0);
    let curve = curve_steps
        .iter()
        .map(|&s| {
            let j = index_of(s);
            let t = s as f64 * dt;
            let sm = sums[j];
            CurvePoint {
                t_s: t,
                zeta_c: rules[j].zeta_c,
                error_threshold_analytic: analytic_error(t, tau1, p.eta),
                error_threshold_empirical: err_thr[j] as f64 / (2.0 * n),
                threshold_ci95: wilson_interval(err_thr[j], 2 * used, Z95),
                error_bayes_empirical: err_bayes[j] as f64 / (2.0 * n),
                bayes_ci95: wilson_interval(err_bayes[j], 2 * used, Z95),
                zeta_mean_spin: sm[0] / n,
                zeta_var_spin: var(sm[0], sm[1]),
                zeta_mean_no_spin: sm[2] / n,
                zeta_var_no_spin: var(sm[2], sm[3]),
            }
        })
        .collect();

    Ok(EnsembleStats {
        params: *p,
        seed: spec.seed,
        trials_requested: spec.trials,
        trials_used: used,
        exclusions,
        dt_s: dt,
        steps,
        tau1_s: tau1,
        curve,
        snapshots: snaps,
    })
}
