use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("grid too coarse or malformed: {0}")]
    GridTooCoarse(String),
    #[error("no conservation ledger for {0}")]
    UnsupportedLedger(String),
    #[error("(omega, gamma) = ({omega}, {gamma}) lies outside the existence domain")]
    OutsideExistenceDomain { omega: f64, gamma: f64 },
    #[error("no turning point of the potential left of chi0 = {chi0}")]
    NoTurningPoint { chi0: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("negative radicand {value:e} at x = {x}")]
    NegativeRadicand { x: f64, value: f64 },
    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),
    #[error("eigensolver failed: {0}")]
    EigensolveFailure(String),
    #[error("spectral gap collapsed: gaps = ({0}, {1})")]
    GapCollapse(f64, f64),
    #[error("time step {dt} differs from grid spacing {dx}")]
    CflViolation { dt: f64, dx: f64 },
    #[error("field does not decay at the boundary: {0:e}")]
    NonDecayingField(f64),
    #[error("root finding failed: {0}")]
    RootNotFound(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::ParamOutOfRange(msg.into())
    }
}
