//! Four-qubit operators commuting with U⊗U⊗V⊗V (U, V Pauli) and their 4×4
//! r-matrix representation μ = Σᵢⱼ Mᵢⱼ Πᵢ⊗Πⱼ.
//!
//! Qubits are A′ B′ A″ B″ in `QubitOrdering::Natural` (big-endian, A′ most
//! significant); the first projector acts on A′B′, the second on A″B″.
//! `QubitOrdering::Cut` regroups them as (A′A″)⊗(B′B″) for the A|B cut.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Index;
use std::sync::OnceLock;

use crate::bell::bell_projectors;
use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, C64, I};
use crate::numerics::tensor::permute_subsystems;
use crate::numerics::{kron, pauli, Tolerances};

/// A permutation of the four Bell indices; `p[k]` is the image of `k`.
pub type BellPermutation = [usize; 4];

pub const IDENTITY_PERMUTATION: BellPermutation = [0, 1, 2, 3];

pub fn invert(p: &BellPermutation) -> BellPermutation {
    let mut inv = [0; 4];
    for (k, &pk) in p.iter().enumerate() {
        inv[pk] = k;
    }
    inv
}

/// (p ∘ q)[k] = p[q[k]]
pub fn compose(p: &BellPermutation, q: &BellPermutation) -> BellPermutation {
    q.map(|k| p[k])
}

pub fn is_permutation(p: &[usize; 4]) -> bool {
    let mut s = *p;
    s.sort_unstable();
    s == IDENTITY_PERMUTATION
}

/// All 24 permutations in lexicographic order.
pub fn all_permutations() -> &'static [BellPermutation] {
    static ALL: OnceLock<Vec<BellPermutation>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        if is_permutation(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    })
}

/// Real 4×4 coefficient matrix of a symmetric four-qubit operator.
#[derive(Clone, Copy, PartialEq)]
pub struct RMatrix([[f64; 4]; 4]);

impl RMatrix {
    pub const fn new(entries: [[f64; 4]; 4]) -> Self {
        Self(entries)
    }

    pub fn zeros() -> Self {
        Self([[0.0; 4]; 4])
    }

    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.0[i][j] = 1.0;
        m
    }

    /// A normalized state: entries ≥ −1e-12 and summing to one.
    pub fn state(entries: [[f64; 4]; 4], tol: &Tolerances) -> Result<Self> {
        let r = Self(entries);
        r.ensure_state(tol)?;
        Ok(r)
    }

    pub fn ensure_state(&self, tol: &Tolerances) -> Result<()> {
        if self.entries().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite r-matrix entry".into()));
        }
        if let Some((i, j)) = self.positions().find(|&(i, j)| self.0[i][j] < -1e-12) {
            return Err(Error::InvalidState(format!(
                "r-matrix entry ({i},{j}) = {} is negative",
                self.0[i][j]
            )));
        }
        let s = self.sum();
        if (s - 1.0).abs() > tol.equality {
            return Err(Error::InvalidState(format!("r-matrix entries sum to {s}, not 1")));
        }
        Ok(())
    }

    pub fn is_state(&self, tol: &Tolerances) -> bool {
        self.ensure_state(tol).is_ok()
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().flatten().copied()
    }

    fn positions(&self) -> impl Iterator<Item = (usize, usize)> {
        (0..4).flat_map(|i| (0..4).map(move |j| (i, j)))
    }

    /// Row-major flattening (the coordinates used by the polytope LP).
    pub fn to_vec(&self) -> Vec<f64> {
        self.entries().collect()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), 16);
        Self(std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j])))
    }

    pub fn sum(&self) -> f64 {
        self.entries().sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + other.0[i][j])))
    }

    /// Divide by the entry sum.
    pub fn normalized(&self) -> Result<Self> {
        let s = self.sum();
        if !(s.abs() > 0.0) {
            return Err(Error::InvalidState("r-matrix with zero trace".into()));
        }
        Ok(self.scaled(1.0 / s))
    }

    /// ⟨W, r⟩ = Σᵢⱼ Wᵢⱼ rᵢⱼ
    pub fn pair(&self, other: &Self) -> f64 {
        self.positions().map(|(i, j)| self.0[i][j] * other.0[i][j]).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.positions()
            .map(|(i, j)| (self.0[i][j] - other.0[i][j]).abs())
            .fold(0.0, f64::max)
    }

    /// r′ᵢⱼ = r[row_perm[i]][col_perm[j]]
    pub fn permute(&self, row_perm: &BellPermutation, col_perm: &BellPermutation) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[row_perm[i]][col_perm[j]])))
    }

    /// Swapping the two copies (𝒜′𝐵′ ↔ 𝒜″𝐵″) transposes r.
    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    /// r·v with v indexed by the column (input) Bell index.
    pub fn apply(&self, v: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * v[j]).sum())
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix [")?;
        for row in &self.0 {
            writeln!(f, "  {:>8.5} {:>8.5} {:>8.5} {:>8.5}", row[0], row[1], row[2], row[3])?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitOrdering {
    /// A′ ⊗ B′ ⊗ A″ ⊗ B″
    Natural,
    /// (A′ ⊗ A″) ⊗ (B′ ⊗ B″)
    Cut,
}

/// Qubit positions (in natural order) that make up the cut order.
pub const CUT_FROM_NATURAL: [usize; 4] = [0, 2, 1, 3];

/// Move qubits: output qubit k is input qubit `order[k]`.
pub fn reorder_qubits(m: &ComplexMatrix, order: &[usize; 4]) -> ComplexMatrix {
    permute_subsystems(m, &[2, 2, 2, 2], order).expect("16x16 operator with four qubit factors")
}

/// Convert between the two orderings (the map is an involution).
pub fn convert_ordering(m: &ComplexMatrix, from: QubitOrdering, to: QubitOrdering) -> ComplexMatrix {
    if from == to {
        m.clone()
    } else {
        reorder_qubits(m, &CUT_FROM_NATURAL)
    }
}

fn tensor_bell_projectors() -> &'static [[ComplexMatrix; 4]; 4] {
    static TABLE: OnceLock<[[ComplexMatrix; 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let p = bell_projectors();
        std::array::from_fn(|i| std::array::from_fn(|j| kron(&p[i], &p[j])))
    })
}

/// Σᵢⱼ Mᵢⱼ Πᵢ⊗Πⱼ as a 16×16 matrix.
pub fn assemble(m: &RMatrix, ordering: QubitOrdering) -> ComplexMatrix {
    let table = tensor_bell_projectors();
    let mut out = ComplexMatrix::zeros(16, 16);
    for i in 0..4 {
        for j in 0..4 {
            if m[(i, j)] != 0.0 {
                out = &out + &table[i][j].scale_real(m[(i, j)]);
            }
        }
    }
    convert_ordering(&out, QubitOrdering::Natural, ordering)
}

/// rᵢⱼ = tr[ρ (Πᵢ⊗Πⱼ)]: the twirl onto the U⊗U⊗V⊗V commutant.
pub fn project_to_commutant(rho: &ComplexMatrix, ordering: QubitOrdering, tol: &Tolerances) -> Result<RMatrix> {
    if rho.rows() != 16 || rho.cols() != 16 {
        return Err(Error::DimMismatch(format!("expected 16x16, got {}x{}", rho.rows(), rho.cols())));
    }
    rho.ensure_hermitian(tol.hermitian.max(1e-12 * rho.max_abs()))?;
    let natural = convert_ordering(rho, ordering, QubitOrdering::Natural);
    let table = tensor_bell_projectors();
    Ok(RMatrix(std::array::from_fn(|i| {
        std::array::from_fn(|j| natural.trace_product(&table[i][j]).re)
    })))
}

/// Product unitary a⊗b on a qubit pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl LocalUnitary {
    pub fn identity() -> Self {
        Self {
            a: pauli::id(),
            b: pauli::id(),
        }
    }

    pub fn full(&self) -> ComplexMatrix {
        kron(&self.a, &self.b)
    }

    /// self after other: (a·a′)⊗(b·b′)
    pub fn then(&self, first: &Self) -> Self {
        Self {
            a: self.a.matmul(&first.a),
            b: self.b.matmul(&first.b),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            a: self.a.adjoint(),
            b: self.b.adjoint(),
        }
    }
}

fn adjacent_swap(i: usize) -> LocalUnitary {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let id = pauli::id();
    let iz = pauli::z().scale(I);
    match i {
        0 => LocalUnitary {
            a: (&id + &iz).scale_real(s),
            b: (&id + &iz).scale_real(s),
        },
        1 => {
            let f = (&pauli::x() + &pauli::z()).scale_real(s);
            LocalUnitary { a: f.clone(), b: f }
        }
        _ => LocalUnitary {
            a: (&id - &iz).scale_real(s),
            b: (&id + &iz).scale_real(s),
        },
    }
}

/// The product unitary exchanging Πᵢ and Πⱼ for adjacent Bell indices
/// (0,1), (1,2), (2,3) and fixing the other two projectors.
///
/// (I+iσz)⊗(I+iσz)/2 swaps Π₀,Π₁; (σx+σz)⊗(σx+σz)/2 swaps Π₁,Π₂;
/// (I−iσz)⊗(I+iσz)/2 swaps Π₂,Π₃.
pub fn swap_unitary(i: usize, j: usize) -> Result<LocalUnitary> {
    let (lo, hi) = (i.min(j), i.max(j));
    if hi != lo + 1 || hi > 3 {
        return Err(Error::UnsupportedPair(i, j));
    }
    Ok(adjacent_swap(lo))
}

fn transposition(k: usize) -> BellPermutation {
    let mut t = IDENTITY_PERMUTATION;
    t.swap(k, k + 1);
    t
}

/// A product unitary U with U Πₖ U† = Π_{perm[k]}, composed from the
/// adjacent swaps (shortest word).
pub fn local_unitary_for_permutation(perm: &BellPermutation) -> LocalUnitary {
    assert!(is_permutation(perm), "{perm:?} is not a permutation");
    // Breadth-first search over S₄ with generators acting after the current word.
    let mut parent: Vec<Option<(BellPermutation, usize)>> = vec![None; 256];
    let key = |p: &BellPermutation| p[0] * 64 + p[1] * 16 + p[2] * 4 + p[3];
    let mut seen = [false; 256];
    let mut queue = VecDeque::from([IDENTITY_PERMUTATION]);
    seen[key(&IDENTITY_PERMUTATION)] = true;
    while let Some(p) = queue.pop_front() {
        if p == *perm {
            break;
        }
        for k in 0..3 {
            let next = compose(&transposition(k), &p);
            if !std::mem::replace(&mut seen[key(&next)], true) {
                parent[key(&next)] = Some((p, k));
                queue.push_back(next);
            }
        }
    }
    let mut word = Vec::new();
    let mut cur = *perm;
    while let Some((prev, k)) = parent[key(&cur)] {
        word.push(k);
        cur = prev;
    }
    word.reverse();
    word.into_iter()
        .fold(LocalUnitary::identity(), |u, k| adjacent_swap(k).then(&u))
}

/// Conjugate a 16×16 naturally ordered operator by (row ⊗ col) local unitaries
/// acting on A′B′ and A″B″ respectively.
pub fn conjugate_natural(m: &ComplexMatrix, on_primed: &LocalUnitary, on_double: &LocalUnitary) -> ComplexMatrix {
    let u = kron(&on_primed.full(), &on_double.full());
    m.conjugate_by(&u)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}
