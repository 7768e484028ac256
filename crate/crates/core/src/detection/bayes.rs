//! Two-hypothesis Bayesian filter on a homodyne record.
//!
//! Each hypothesis predicts the mean of the next increment; the increment
//! likelihood is Gaussian with that mean and variance η·dt. The spin
//! hypothesis carries a conditioned two-level state driven by its own
//! innovation, the no-spin hypothesis a constant mean.

use super::signal::Decision;
use crate::dynamics::effective::GROUND;
use crate::dynamics::{HomodyneRecord, ModelParams, Noise, SmeStepper};
use crate::error::{Error, Result};
use crate::numerics::Mat2;

/// p_spin(t) sampled along a record.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorTrace {
    pub times_s: Vec<f64>,
    pub p_spin: Vec<f64>,
    pub log_lik_spin: Vec<f64>,
    pub log_lik_no_spin: Vec<f64>,
}

impl PosteriorTrace {
    pub fn p_no_spin(&self) -> Vec<f64> {
        self.p_spin.iter().map(|p| 1.0 - p).collect()
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Incremental filter; feed it one dY at a time.
#[derive(Clone, Debug)]
pub struct BayesFilter {
    stepper: SmeStepper,
    rho: Mat2,
    log_prior_odds: f64,
    log_lik_spin: f64,
    log_lik_no_spin: f64,
    inv_two_var: f64,
    bare: f64,
    steps: usize,
}

impl BayesFilter {
    pub fn new(p: &ModelParams, dt: f64, prior_spin: f64) -> Result<Self> {
        if !(prior_spin > 0.0 && prior_spin < 1.0) {
            return Err(Error::invalid("prior", "must lie strictly between 0 and 1"));
        }
        let stepper = SmeStepper::new(p, dt)?;
        let bare = stepper.bare_mean_increment();
        Ok(Self {
            stepper,
            rho: GROUND,
            log_prior_odds: (prior_spin / (1.0 - prior_spin)).ln(),
            log_lik_spin: 0.0,
            log_lik_no_spin: 0.0,
            inv_two_var: 1.0 / (2.0 * p.eta * dt),
            bare,
            steps: 0,
        })
    }

    #[inline]
    pub fn update(&mut self, d_y: f64) -> Result<()> {
        let m_spin = self.stepper.mean_increment(&self.rho);
        let (a, b) = (d_y - m_spin, d_y - self.bare);
        self.log_lik_spin -= a * a * self.inv_two_var;
        self.log_lik_no_spin -= b * b * self.inv_two_var;
        if !self.log_lik_spin.is_finite() || !self.log_lik_no_spin.is_finite() {
            return Err(Error::Likelihood { step: self.steps });
        }
        self.rho = self.stepper.step(&self.rho, Noise::Filter(d_y), self.steps)?.0;
        self.steps += 1;
        Ok(())
    }

    /// Posterior log-odds of "spin".
    pub fn log_odds(&self) -> f64 {
        self.log_prior_odds + self.log_lik_spin - self.log_lik_no_spin
    }

    pub fn p_spin(&self) -> f64 {
        logistic(self.log_odds())
    }

    /// Spin iff p_spin > 1/2.
    pub fn decision(&self) -> Decision {
        if self.log_odds() > 0.0 {
            Decision::Spin
        } else {
            Decision::NoSpin
        }
    }

    pub fn log_likelihoods(&self) -> (f64, f64) {
        (self.log_lik_spin, self.log_lik_no_spin)
    }

    pub fn state(&self) -> &Mat2 {
        &self.rho
    }
}

/// Default storage cadence, ⌈τ₁/(100·dt)⌉ steps.
pub fn posterior_cadence(tau1: f64, dt: f64) -> usize {
    ((tau1 / (100.0 * dt)).ceil() as usize).max(1)
}

/// Run the filter over a whole record, storing every `every` steps (the
/// prior at t = 0 is always the first sample).
pub fn bayes_filter(record: &HomodyneRecord, p: &ModelParams, prior_spin: f64, every: usize) -> Result<PosteriorTrace> {
    let mut f = BayesFilter::new(p, record.dt_s, prior_spin)?;
    let every = every.max(1);
    let mut trace = PosteriorTrace {
        times_s: vec![0.0],
        p_spin: vec![f.p_spin()],
        log_lik_spin: vec![0.0],
        log_lik_no_spin: vec![0.0],
    };
    for (k, &d_y) in record.dy.iter().enumerate() {
        f.update(d_y)?;
        if (k + 1) % every == 0 || k + 1 == record.dy.len() {
            let (ls, ln) = f.log_likelihoods();
            trace.times_s.push((k + 1) as f64 * record.dt_s);
            trace.p_spin.push(f.p_spin());
            trace.log_lik_spin.push(ls);
            trace.log_lik_no_spin.push(ln);
        }
    }
    Ok(trace)
}
