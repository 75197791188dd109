//! Dense complex linear algebra and the convex-hull membership kernel.

pub mod eigen;
pub mod lp;
pub mod matrix;
pub mod pauli;
pub mod tensor;
mod tolerance;

pub use eigen::{hermitian_eigensystem, hermitian_eigenvalues, Eigensystem};
pub use lp::{convex_membership, LpProblem, Membership, SeparatingFunctional};
pub use matrix::{ComplexMatrix, C64};
pub use tensor::{kron, partial_trace, partial_transpose};
pub use tolerance::Tolerances;
