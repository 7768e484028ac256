//! Discrimination of spin / no-spin records: integrated signal with a
//! threshold, Bayesian posterior, and Monte Carlo error estimates.

pub mod bayes;
pub mod ensemble;
pub mod export;
pub mod signal;
pub mod stats;

pub use bayes::{bayes_filter, posterior_cadence, BayesFilter, PosteriorTrace};
pub use ensemble::{run_ensemble, CurvePoint, EnsembleSpec, EnsembleStats, Exclusion, Method, Snapshot};
pub use export::{write_error_curves, write_posterior_samples, write_zeta_samples, Manifest};
pub use signal::{analytic_error, integrate_signal, threshold_classify, Decision, IntegratedSignal, SignalMeans, ThresholdRule};
