use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M†| = {residual:e} (max |M| = {scale:e})")]
    NotHermitian { residual: f64, scale: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("no sign change of the detuning on [{lo:e}, {hi:e}] T")]
    Unbracketed { lo: f64, hi: f64 },

    #[error("point ({x:e}, {y:e}) m lies inside the conductor cross-section")]
    InsideConductor { x: f64, y: f64 },

    #[error("Fock truncation leakage: top level population {population:e} exceeds {limit:e}")]
    FockLeakage { population: f64, limit: f64 },

    #[error("non-finite state at step {step} (t = {time:e} s); reduce dt")]
    NonFinite { step: usize, time: f64 },

    #[error("positivity violated at step {step}: min eigenvalue {min_eigenvalue:e}")]
    Positivity { step: usize, min_eigenvalue: f64 },

    #[error("step size violates dt*max_rate <= {limit}: dt = {dt:e} s, max rate = {max_rate:e} /s")]
    StepTooLarge { dt: f64, max_rate: f64, limit: f64 },

    #[error("non-finite likelihood at step {step}")]
    Likelihood { step: usize },

    #[error("{excluded} of {total} trials failed (more than 1%)")]
    TooManyExclusions { excluded: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.into(), reason: reason.into() }
    }

    pub fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { path: path.into(), reason: reason.into() }
    }

    /// Process exit code: 2 for configuration and I/O problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } | Error::Json(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
