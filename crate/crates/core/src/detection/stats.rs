//! Small statistics helpers: normal CDF, Wilson intervals, moments and the
//! Anderson–Darling normality test.

/// Standard normal cumulative distribution.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Wilson score interval for `k` successes in `n` trials at `z` sigmas.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Sample mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Anderson–Darling test for normality with mean and variance estimated
/// from the sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AndersonDarling {
    /// A² with the small-sample correction (1 + 0.75/n + 2.25/n²).
    pub statistic: f64,
    /// Critical value at the 1% level for the estimated-parameter case.
    pub critical_1pct: f64,
}

impl AndersonDarling {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_1pct
    }
}

pub fn anderson_darling(xs: &[f64]) -> Option<AndersonDarling> {
    if xs.len() < 8 {
        return None;
    }
    let (mean, var) = mean_var(xs);
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return None;
    }
    let mut z: Vec<f64> = xs.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let n = z.len();
    let nf = n as f64;
    let mut s = 0.0;
    for i in 0..n {
        let lo = normal_cdf(z[i]).max(1e-300);
        let hi = (1.0 - normal_cdf(z[n - 1 - i])).max(1e-300);
        s += (2.0 * i as f64 + 1.0) * (lo.ln() + hi.ln());
    }
    let a2 = -nf - s / nf;
    Some(AndersonDarling { statistic: a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf)), critical_1pct: 1.035 })
}
