use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NonHermitian(f64),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("state is not Bell-diagonal (largest off-diagonal Bell element {0:.3e})")]
    NotBellDiagonal(f64),

    #[error("point lies outside the Bell tetrahedron (weight {0:.3e})")]
    OutOfTetrahedron(f64),

    #[error("no direct local unitary for Bell pair ({0}, {1}); compose adjacent swaps")]
    UnsupportedPair(usize, usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("no qudit encoding reproduces the extension identity (residuals {0:?})")]
    NoEncodingMatches(Vec<f64>),

    #[error("map annihilates the input state")]
    Annihilated,

    #[error("matrix is not a vertex of the separable polytope")]
    NotAVertex,

    #[error("parameter b = {0} outside [0, 1/2]")]
    BOutOfRange(f64),

    #[error("weight vector is not in descending order")]
    NotOrdered,

    #[error("weight vector is not entangled (largest weight {0} <= 1/2)")]
    NotEntangled(f64),

    #[error("target is not reachable from source")]
    NotConvertible,

    #[error("input state is separable")]
    SeparableInput,

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}
