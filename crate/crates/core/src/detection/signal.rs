//! Integrated homodyne signal and the threshold test.

use crate::dynamics::{steady_sigma_minus, HomodyneRecord, MeasurementOperator, ModelParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Spin,
    NoSpin,
}

/// ζ(t) = (1/√t) Σ dY at the requested times.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratedSignal {
    pub times_s: Vec<f64>,
    pub zeta: Vec<f64>,
}

/// Sample ζ after each of the given step counts (1-based: `n` means the
/// first `n` increments).
pub fn integrate_signal(record: &HomodyneRecord, steps: &[usize]) -> Result<IntegratedSignal> {
    if record.dy.is_empty() {
        return Err(Error::invalid("record", "is empty"));
    }
    let mut times_s = Vec::with_capacity(steps.len());
    let mut zeta = Vec::with_capacity(steps.len());
    let mut sum = 0.0;
    let mut done = 0;
    for &n in steps {
        if n == 0 {
            return Err(Error::invalid("sample time", "t = 0 is excluded (normalization is singular)"));
        }
        if n > record.dy.len() {
            return Err(Error::invalid("sample time", format!("step {n} is beyond the record ({})", record.dy.len())));
        }
        if n < done {
            return Err(Error::invalid("sample time", "sample steps must be non-decreasing"));
        }
        sum += record.dy[done..n].iter().sum::<f64>();
        done = n;
        let t = n as f64 * record.dt_s;
        times_s.push(t);
        zeta.push(sum / t.sqrt());
    }
    Ok(IntegratedSignal { times_s, zeta })
}

/// Mean ζ per √s for each hypothesis, from the steady-state coherence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalMeans {
    pub spin_per_sqrt_s: f64,
    pub no_spin_per_sqrt_s: f64,
}

impl SignalMeans {
    pub fn new(p: &ModelParams) -> Self {
        let m = MeasurementOperator::new(p);
        Self {
            spin_per_sqrt_s: p.eta * m.quadrature(steady_sigma_minus(p)),
            no_spin_per_sqrt_s: m.bare_rate(p.eta),
        }
    }

    /// Δμ(t) = μ_spin − μ_nospin.
    pub fn separation(&self, t: f64) -> f64 {
        (self.spin_per_sqrt_s - self.no_spin_per_sqrt_s) * t.sqrt()
    }

    pub fn rule(&self, t: f64) -> ThresholdRule {
        let (a, b) = (self.spin_per_sqrt_s * t.sqrt(), self.no_spin_per_sqrt_s * t.sqrt());
        ThresholdRule { zeta_c: 0.5 * (a + b), spin_below: a < b }
    }
}

/// Midpoint threshold with orientation taken from the sign of Δμ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdRule {
    pub zeta_c: f64,
    /// The spin lowers the mean signal (absorption dip).
    pub spin_below: bool,
}

impl ThresholdRule {
    pub fn classify(&self, zeta: f64) -> Decision {
        threshold_classify(zeta, self.zeta_c, self.spin_below)
    }
}

/// Spin iff ζ lies strictly on the spin side of ζ_c; ties go to "no spin".
pub fn threshold_classify(zeta: f64, zeta_c: f64, spin_below: bool) -> Decision {
    let spin = if spin_below { zeta < zeta_c } else { zeta > zeta_c };
    if spin {
        Decision::Spin
    } else {
        Decision::NoSpin
    }
}

/// ε_η(t) = ½[1 − erf(√η/(2√2)·√(t/τ₁))].
pub fn analytic_error(t: f64, tau1: f64, eta: f64) -> f64 {
    let x = eta.sqrt() / (2.0 * std::f64::consts::SQRT_2) * (t / tau1).sqrt();
    0.5 * libm::erfc(x)
}
