use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integrator step size underflow at tau = {tau}")]
    StepUnderflow { tau: f64 },
    #[error("integrator exceeded {steps} steps before tau = {tau}")]
    MaxSteps { steps: usize, tau: f64 },
    #[error("tau = {tau} outside solution range [0, {end}]")]
    OutOfRange { tau: f64, end: f64 },
    #[error("Bogoliubov normalization violated: |alpha|^2 - |beta|^2 = {norm}")]
    InconsistentBogoliubov { norm: f64 },
    #[error("arcosh argument {arg} below 1 beyond the clamping window")]
    ArcoshDomain { arg: f64 },
    #[error("no closed-form derivative for {0}")]
    UnsupportedClosedForm(String),
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("cramer-rao bound unbounded: QFI is zero")]
    UnboundedVariance,
    #[error("truncation leakage {leakage:e} exceeds {limit:e} ({what})")]
    TruncationLeakage {
        what: String,
        leakage: f64,
        limit: f64,
    },
    #[error("no convergence after {halvings} step halvings (last difference {diff:e})")]
    NoConvergence { halvings: usize, diff: f64 },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
