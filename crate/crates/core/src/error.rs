use alloc::string::String;

use crate::mesh::Shape;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("non-finite value at cell {cell}")]
    NonFinite { cell: usize },
    #[error("shape mismatch: expected {expected:?}, got {found:?}")]
    ShapeMismatch { expected: Shape, found: Shape },
    #[error("solution blew up at t = {t}")]
    BlowUp { t: f64 },
    #[error("reference trajectory undefined at t = {t}")]
    TrajectoryUndefined { t: f64 },
    #[error("non-admissible state: {0}")]
    NonAdmissible(String),
    #[error("dry state (h = {h}) at cell {cell}")]
    DryState { cell: usize, h: f64 },
    #[error("newton iteration failed at cell {cell} on the {branch} branch")]
    NewtonFailure { cell: usize, branch: &'static str },
    #[error("no admissible shock position: {0}")]
    NoShock(&'static str),
    #[error("{0}")]
    Domain(&'static str),
}
