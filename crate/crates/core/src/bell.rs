//! Bell basis, Bell-diagonal states and their weight/coordinate descriptions.
//!
//! Index convention (0-based throughout the crate):
//! Φ₀,₁ = (|00⟩ ± |11⟩)/√2 and Φ₂,₃ = (|01⟩ ± |10⟩)/√2.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, C64, ZERO};
use crate::numerics::{kron, pauli, partial_transpose, hermitian_eigenvalues, Tolerances};

/// (−⟨σx⊗σx⟩, −⟨σy⊗σy⟩, −⟨σz⊗σz⟩) of each Bell state.
pub const BELL_COORDS: [[f64; 3]; 4] = [
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0],
];

/// √2 |Φᵢ⟩, with entries in {0, ±1}.
fn bell_signs(i: usize) -> [C64; 4] {
    let one = C64::new(1.0, 0.0);
    match i {
        0 => [one, ZERO, ZERO, one],
        1 => [one, ZERO, ZERO, -one],
        2 => [ZERO, one, one, ZERO],
        3 => [ZERO, one, -one, ZERO],
        _ => panic!("Bell index {i} out of range"),
    }
}

pub fn bell_vector(i: usize) -> [C64; 4] {
    bell_signs(i).map(|x| x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Πᵢ = |Φᵢ⟩⟨Φᵢ|, built once from exact ±1/2 entries.
pub fn bell_projectors() -> &'static [ComplexMatrix; 4] {
    static PROJECTORS: OnceLock<[ComplexMatrix; 4]> = OnceLock::new();
    PROJECTORS.get_or_init(|| std::array::from_fn(|i| ComplexMatrix::projector(&bell_signs(i)).scale_real(0.5)))
}

pub fn bell_projector(i: usize) -> &'static ComplexMatrix {
    &bell_projectors()[i]
}

/// Columns are the Bell vectors: U† ρ U is ρ written in the Bell basis.
pub fn bell_basis_change() -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        u.set_column(i, &bell_vector(i));
    }
    u
}

/// Probabilities on the four Bell projectors.
#[derive(Clone, Copy, PartialEq)]
pub struct WeightVector([f64; 4]);

impl WeightVector {
    pub fn new(w: [f64; 4]) -> Result<Self> {
        Self::with_tolerance(w, &Tolerances::default())
    }

    pub fn with_tolerance(w: [f64; 4], tol: &Tolerances) -> Result<Self> {
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite Bell weight".into()));
        }
        if let Some(x) = w.iter().find(|&&x| x < -1e-12) {
            return Err(Error::InvalidState(format!("negative Bell weight {x}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > tol.equality {
            return Err(Error::InvalidState(format!("Bell weights sum to {sum}, not 1")));
        }
        Ok(Self(w))
    }

    /// Divide by the ℓ¹ norm; errors when all weights vanish.
    pub fn normalized(w: [f64; 4]) -> Result<Self> {
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidState("zero weight vector".into()));
        }
        Self::new(w.map(|x| x / sum))
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    pub fn bell(i: usize) -> Self {
        let mut w = [0.0; 4];
        w[i] = 1.0;
        Self(w)
    }

    pub fn as_array(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// λ₀ ≥ λ₁ ≥ λ₂ ≥ λ₃ within 1e-12.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1] - 1e-12)
    }

    pub fn ensure_ordered(&self) -> Result<()> {
        if self.is_ordered() {
            Ok(())
        } else {
            Err(Error::NotOrdered)
        }
    }

    pub fn permuted(&self, perm: &[usize; 4]) -> Self {
        Self(perm.map(|k| self.0[k]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{:?}", self.0)
    }
}

/// Point (x, y, z) = (−⟨σx⊗σx⟩, −⟨σy⊗σy⟩, −⟨σz⊗σz⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CorrelationCoords {
    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Read the coordinates off an arbitrary two-qubit state.
    pub fn of_density(rho: &ComplexMatrix) -> Self {
        let corr = |p: ComplexMatrix| -> f64 { -rho.trace_product(&kron(&p, &p)).re };
        Self {
            x: corr(pauli::x()),
            y: corr(pauli::y()),
            z: corr(pauli::z()),
        }
    }
}

/// ρ = Σ λᵢ Πᵢ
pub fn weights_to_density(w: &WeightVector) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(4, 4);
    for (i, p) in bell_projectors().iter().enumerate() {
        rho = &rho + &p.scale_real(w.get(i));
    }
    rho
}

/// Inverse of [`weights_to_density`]; rejects states with Bell-basis coherences.
pub fn density_to_weights(rho: &ComplexMatrix, tol: &Tolerances) -> Result<WeightVector> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimMismatch(format!("expected 4x4, got {}x{}", rho.rows(), rho.cols())));
    }
    let u = bell_basis_change();
    let in_bell = u.adjoint().matmul(rho).matmul(&u);
    let mut off = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                off = off.max(in_bell[(i, j)].norm());
            }
        }
    }
    if off >= tol.equality {
        return Err(Error::NotBellDiagonal(off));
    }
    WeightVector::with_tolerance(std::array::from_fn(|i| in_bell[(i, i)].re), tol)
}

pub fn weights_to_coords(w: &WeightVector) -> CorrelationCoords {
    let mut c = [0.0; 3];
    for (i, bc) in BELL_COORDS.iter().enumerate() {
        for k in 0..3 {
            c[k] += w.get(i) * bc[k];
        }
    }
    CorrelationCoords { x: c[0], y: c[1], z: c[2] }
}

/// λᵢ = (1 + cᵢ·p)/4, using Σᵢ cᵢcᵢᵀ = 4·I for the Bell coordinates.
pub fn coords_to_weights(p: &CorrelationCoords) -> Result<WeightVector> {
    let pa = p.as_array();
    let w: [f64; 4] = std::array::from_fn(|i| {
        (1.0 + BELL_COORDS[i].iter().zip(&pa).map(|(a, b)| a * b).sum::<f64>()) / 4.0
    });
    if let Some(&bad) = w.iter().find(|&&x| x < -1e-9) {
        return Err(Error::OutOfTetrahedron(bad));
    }
    WeightVector::new(w.map(|x| x.max(0.0)))
}

/// Sort descending, stable on ties. `perm[k]` is the input slot that lands
/// in output slot k.
pub fn canonical_order(w: &WeightVector) -> (WeightVector, [usize; 4]) {
    let mut perm = [0, 1, 2, 3];
    perm.sort_by(|&a, &b| w.get(b).total_cmp(&w.get(a)));
    (w.permuted(&perm), perm)
}

/// Bell-diagonal states are entangled iff some weight exceeds 1/2; the
/// boundary λ = 1/2 counts as separable.
pub fn is_entangled_bd(w: &WeightVector) -> bool {
    w.max() > 0.5 + 1e-12
}

/// Smallest eigenvalue of ρ^{T_B} for a two-qubit state.
pub fn ppt_min_eigenvalue(rho: &ComplexMatrix) -> Result<f64> {
    let pt = partial_transpose(rho, &[2, 2], 1)?;
    Ok(hermitian_eigenvalues(&pt)?[0])
}
