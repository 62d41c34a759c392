use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate immersion: {0}")]
    Degenerate(String),
    #[error("inconsistent sinh-Gordon solution: {0}")]
    InconsistentSolution(String),
    #[error("reflection group did not close within {cap} elements")]
    NonDiscrete { cap: usize },
    #[error("assembly failed: {0}")]
    Assembly(String),
    #[error("mesh needs remeshing: minimum triangle angle {min_angle_deg:.3} degrees")]
    RemeshNeeded { min_angle_deg: f64 },
    #[error("no sister correspondence for kappa = {kappa}, tau = {tau}")]
    UnsupportedCorrespondence { kappa: f64, tau: f64 },
    #[error("refusing to use a non-converged mesh: {0}")]
    NotConverged(String),
    #[error("spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
