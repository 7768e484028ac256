use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Reproducible Gaussian source.
///
/// Streams are ChaCha8 generators keyed by the 64-bit seed. Independent
/// per-trial streams are obtained with [`RngStream::split`], which selects
/// the ChaCha stream id on the same key: trial `k` of a run with master seed
/// `s` draws from `(key = s, stream = k)`. Draws never overlap between
/// streams.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    position: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, position: 0, rng }
    }

    /// Child stream number `index` under the same master seed.
    pub fn split(&self, index: u64) -> Self {
        Self::with_stream(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of Gaussian draws taken so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.position += 1;
        self.rng.sample(StandardNormal)
    }

    /// Wiener increment with zero mean and variance `dt`.
    pub fn gaussian_increment(&mut self, dt: f64) -> f64 {
        debug_assert!(dt > 0.0);
        self.standard_normal() * dt.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn unit_dt_mean_is_zero() {
        let mut r = RngStream::new(1);
        let xs: Vec<f64> = (0..1_000_000).map(|_| r.gaussian_increment(1.0)).collect();
        let (mean, _) = moments(&xs);
        assert!(mean.abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn small_dt_variance() {
        let mut r = RngStream::new(2);
        let dt = 1e-6;
        let xs: Vec<f64> = (0..1_000_000).map(|_| r.gaussian_increment(dt)).collect();
        let (_, var) = moments(&xs);
        assert!((var / dt - 1.0).abs() < 0.005, "var/dt {}", var / dt);
    }

    #[test]
    fn seed_42_first_draw_is_stable() {
        let a = RngStream::new(42).gaussian_increment(1.0);
        let b = RngStream::new(42).gaussian_increment(1.0);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn split_streams_differ() {
        let base = RngStream::new(9);
        let mut a = base.split(0);
        let mut b = base.split(1);
        assert_ne!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        assert_eq!(a.position(), 1);
    }

    #[test]
    fn mean_variance_autocorrelation_at_four_sigma() {
        let n = 1_000_000usize;
        let mut r = RngStream::new(2024);
        let xs: Vec<f64> = (0..n).map(|_| r.standard_normal()).collect();
        let (mean, var) = moments(&xs);
        let nf = n as f64;
        assert!(mean.abs() < 4.0 / nf.sqrt());
        // Var of the sample variance for a Gaussian is 2/(n-1)
        assert!((var - 1.0).abs() < 4.0 * (2.0 / nf).sqrt());
        let lag1 = xs.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / ((nf - 1.0) * var);
        assert!(lag1.abs() < 4.0 / nf.sqrt(), "lag-1 {lag1}");
    }
}
