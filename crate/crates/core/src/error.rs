use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gell-Mann index {0} out of range 1..=8")]
    IndexOutOfRange(usize),

    #[error("Bloch component {index} is not finite")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace is {trace} (|trace - 1| = {deviation:e})")]
    WrongTrace { trace: f64, deviation: f64 },

    #[error("inconsistent linear system while {context}")]
    InconsistentSystem { context: &'static str },

    #[error("linear system for {context} has a {nullity}-dimensional solution family")]
    Underdetermined { context: &'static str, nullity: usize },

    #[error("degree {degree} exceeds supported maximum {max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("grid size must be at least 2, got {0}")]
    InvalidGridSize(usize),

    #[error("quadrature residual {residual:e} at degree {degree} exceeds 0.1")]
    QuadratureResidual { degree: usize, residual: f64 },

    #[error("generator index {0} is not one of the local subgroup generators 1, 2, 3, 8")]
    NotLocalGenerator(usize),
}
