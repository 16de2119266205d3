use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hyperbolic angle needs two time-like vectors of the same orientation")]
    NotTimeLike,
    #[error("light-like rotation axis")]
    LightLikeAxis,
    #[error("matrix is not a proper orthochronous Minkowski rotation (defect {0:e})")]
    NotRotation(f64),
    #[error("p={p} and q={q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("numerical blow-up at step {step} (t = {t}): {detail}")]
    BlowUp { step: usize, t: f64, detail: String },
    #[error("integrator could not reach tolerance {tol:e} within {steps} steps")]
    Tolerance { tol: f64, steps: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
