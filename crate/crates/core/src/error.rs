use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("argument z = {re} + {im}i lies on a branch cut of the Ferrers function")]
    OnCut { re: f64, im: f64 },

    #[error("Ferrers evaluation did not converge: {0}")]
    Convergence(String),

    #[error("mass parameter M = 1 is excluded (the energy splitting degenerates)")]
    ExcludedMass,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: l = {l}, m = {m}")]
    Index { l: i64, m: i64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("probe point too close to a coordinate pole (theta = {theta})")]
    PoleProximity { theta: f64 },

    #[error("Ferrers function vanishes at t = {t} for l = {l}")]
    ZeroCrossing { l: usize, t: f64 },

    #[error("probe value |u| = {0:e} too small for a ratio estimate")]
    SmallProbe(f64),

    #[error("fixture schema: {0}")]
    Schema(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
