//! Single-qubit Pauli matrices.

use super::matrix::{ComplexMatrix, I, ONE, ZERO};

pub fn id() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]])
}

pub fn z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]])
}

/// σ₀..σ₃ = I, X, Y, Z.
pub fn all() -> [ComplexMatrix; 4] {
    [id(), x(), y(), z()]
}
