//! Separable maps that preserve Bell-diagonality, their Choi–Jamiołkowski
//! states, and the non-Bell-diagonal ρ_ND family.
//!
//! A map with Kraus pairs (Aᵢ, Bᵢ) acts as ρ ↦ Σᵢ (Aᵢ⊗Bᵢ) ρ (Aᵢ⊗Bᵢ)†. Its
//! CJ state lives on A′B′ (output) ⊗ A″B″ (input) in natural qubit order, so
//! r-matrix rows index the output Bell state and columns the input.

use crate::bell::{WeightVector, weights_to_density};
use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, ONE, ZERO};
use crate::numerics::{hermitian_eigenvalues, kron, partial_trace, pauli, Tolerances};
use crate::separability::{vertex_set, Vertex};
use crate::symmetric::{invert, local_unitary_for_permutation, project_to_commutant, QubitOrdering, RMatrix};

/// Kraus operators below this trace are treated as annihilating the input.
const ANNIHILATION: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl KrausPair {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Self {
        Self { a, b }
    }

    pub fn full(&self) -> ComplexMatrix {
        kron(&self.a, &self.b)
    }
}

/// Kraus pairs rescaled so that λ_max(Σ K†K) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableMap {
    kraus: Vec<KrausPair>,
    /// λ_max(Σ K†K) of the operators as supplied, before rescaling.
    scale: f64,
}

fn kraus_sum(kraus: &[KrausPair]) -> ComplexMatrix {
    kraus.iter().fold(ComplexMatrix::zeros(4, 4), |acc, k| {
        let f = k.full();
        &acc + &f.adjoint().matmul(&f)
    })
}

impl SeparableMap {
    pub fn new(kraus: Vec<KrausPair>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::DegenerateInput("map with no Kraus operators".into()));
        }
        let shapes_ok = kraus
            .iter()
            .all(|k| [&k.a, &k.b].iter().all(|m| m.rows() == 2 && m.cols() == 2));
        if !shapes_ok {
            return Err(Error::DimMismatch("Kraus factors must be 2x2".into()));
        }
        let scale = *hermitian_eigenvalues(&kraus_sum(&kraus).hermitian_part())?.last().unwrap();
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::DegenerateInput("Kraus operators are all zero".into()));
        }
        let s = 1.0 / scale.sqrt();
        let kraus = kraus
            .into_iter()
            .map(|k| KrausPair::new(k.a.scale_real(s), k.b))
            .collect();
        Ok(Self { kraus, scale })
    }

    pub fn kraus(&self) -> &[KrausPair] {
        &self.kraus
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The Kraus pairs as supplied (before rescaling).
    pub fn raw_kraus(&self) -> Vec<KrausPair> {
        let s = self.scale.sqrt();
        self.kraus
            .iter()
            .map(|k| KrausPair::new(k.a.scale_real(s), k.b.clone()))
            .collect()
    }

    pub fn kraus_sum(&self) -> ComplexMatrix {
        kraus_sum(&self.kraus)
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.kraus_sum().max_abs_diff(&ComplexMatrix::identity(4)) <= tol
    }

    /// Σ K ρ K† without normalization.
    pub fn apply_unnormalized(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.kraus.iter().fold(ComplexMatrix::zeros(4, 4), |acc, k| {
            &acc + &rho.conjugate_by(&k.full())
        })
    }

    /// Conjugate every Kraus pair: K ↦ (u_out) K (u_in).
    fn sandwiched(&self, out: &crate::symmetric::LocalUnitary, inp: &crate::symmetric::LocalUnitary) -> Self {
        let kraus = self
            .kraus
            .iter()
            .map(|k| KrausPair::new(out.a.matmul(&k.a).matmul(&inp.a), out.b.matmul(&k.b).matmul(&inp.b)))
            .collect();
        Self { kraus, scale: self.scale }
    }
}

/// Unnormalized CJ state Σᵢ (Kᵢ⊗I)|Ω⟩⟨Ω|(Kᵢ⊗I)† with |Ω⟩ = Σₓ|x⟩|x⟩,
/// 16×16 in the requested qubit order.
pub fn cj_state(map: &SeparableMap, ordering: QubitOrdering) -> ComplexMatrix {
    let mut omega = vec![ZERO; 16];
    for x in 0..4 {
        omega[x * 4 + x] = ONE;
    }
    let id = ComplexMatrix::identity(4);
    let mut out = ComplexMatrix::zeros(16, 16);
    for k in map.kraus() {
        let v = kron(&k.full(), &id).matvec(&omega);
        out = &out + &ComplexMatrix::projector(&v);
    }
    crate::symmetric::convert_ordering(&out, QubitOrdering::Natural, ordering)
}

/// Commutant projection of the CJ state, normalized to unit entry sum.
pub fn cj_rmatrix(map: &SeparableMap, tol: &Tolerances) -> Result<RMatrix> {
    project_to_commutant(&cj_state(map, QubitOrdering::Natural), QubitOrdering::Natural, tol)?.normalized()
}

/// ℰ(ρ) = tr_in[(I⊗ρᵀ) ρ_ℰ] for a naturally ordered CJ operator.
pub fn action_from_cj(cj: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lifted = kron(&ComplexMatrix::identity(4), &rho.transpose()).matmul(cj);
    partial_trace(&lifted, &[4, 4], &[0])
}

/// Bell-diagonal action λ ↦ rλ/‖rλ‖₁; also returns ‖rλ‖₁.
pub fn map_action_bd(r: &RMatrix, w: &WeightVector) -> Result<(WeightVector, f64)> {
    if r.entries().any(|x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::InvalidState("map r-matrix must be entrywise nonnegative".into()));
    }
    let out = r.apply(w.as_array());
    let weight: f64 = out.iter().sum();
    if weight <= ANNIHILATION {
        return Err(Error::Annihilated);
    }
    Ok((WeightVector::normalized(out)?, weight))
}

fn ket_bra(a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(a, b)] = ONE;
    m
}

/// Correlated Pauli twirl {σₖ⊗σₖ/2}: dephases in the Bell basis.
pub fn bell_dephasing() -> SeparableMap {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let kraus = pauli::all()
        .into_iter()
        .map(|s| KrausPair::new(s.scale_real(h), s.scale_real(h)))
        .collect();
    SeparableMap::new(kraus).expect("valid Kraus set")
}

/// {|a⟩⟨b|⊗|a⟩⟨b|/√2}: measure the {Φ₀,Φ₁} block, prepare its even mixture.
pub fn block_mixing() -> SeparableMap {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut kraus = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            kraus.push(KrausPair::new(ket_bra(a, b).scale_real(h), ket_bra(a, b)));
        }
    }
    SeparableMap::new(kraus).expect("valid Kraus set")
}

/// Explicit product Kraus operators whose CJ projection is the vertex `v`.
pub fn kraus_for_vertex(v: &RMatrix) -> Result<SeparableMap> {
    let vertex: &Vertex = vertex_set()
        .iter()
        .find(|x| x.r.max_abs_diff(v) <= 1e-12)
        .ok_or(Error::NotAVertex)?;
    let base = match vertex.kind {
        crate::separability::VertexKind::D0 => bell_dephasing(),
        crate::separability::VertexKind::G0 => block_mixing(),
    };
    // Input Bell j is routed through canonical column col_perm[j] and
    // canonical output row k lands on row row_perm⁻¹[k].
    let out = local_unitary_for_permutation(&invert(&vertex.row_perm));
    let inp = local_unitary_for_permutation(&vertex.col_perm);
    Ok(base.sandwiched(&out, &inp))
}

/// σ = Σ KρK†; returns (σ/tr σ, tr σ).
pub fn apply_map_density(map: &SeparableMap, rho: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimMismatch(format!("expected 4x4, got {}x{}", rho.rows(), rho.cols())));
    }
    let sigma = map.apply_unnormalized(rho);
    let p = sigma.trace().re;
    if p < ANNIHILATION {
        return Err(Error::Annihilated);
    }
    Ok((sigma.scale_real(1.0 / p), p))
}

/// Parameter of the non-Bell-diagonal SLOCC class, 0 ≤ b ≤ 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NDState(f64);

impl NDState {
    pub fn new(b: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&b) {
            return Err(Error::BOutOfRange(b));
        }
        Ok(Self(b))
    }

    pub fn b(&self) -> f64 {
        self.0
    }

    pub fn density(&self) -> ComplexMatrix {
        let b = self.0;
        ComplexMatrix::from_real_rows(&[
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.25, 0.5 * b, 0.0],
            [0.0, 0.5 * b, 0.25, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
    }

    /// The Bell-diagonal state reached by quasi-distillation.
    pub fn distilled(&self) -> ComplexMatrix {
        let b = self.0;
        ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, -b, 0.0],
            [0.0, -b, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
    }

    /// Bell weights of `distilled()`.
    pub fn distilled_weights(&self) -> WeightVector {
        let b = self.0;
        WeightVector::new([0.0, 0.0, 0.5 - b, 0.5 + b]).expect("valid weights for b in range")
    }

    /// Two-term product map taking `distilled()` back to `density()`.
    pub fn quasi_reverse_map(&self) -> SeparableMap {
        let b = self.0;
        let t = -2.0 * b + (1.0 + 4.0 * b * b).sqrt();
        let r = |rows: [[f64; 2]; 2]| ComplexMatrix::from_real_rows(&rows);
        let kraus = vec![
            KrausPair::new(r([[t, -0.5], [1.0, 0.0]]), r([[1.0, 0.5], [1.0, 0.0]])),
            KrausPair::new(r([[-t, 0.5], [1.0, 0.0]]), r([[1.0, 0.5], [-1.0, 0.0]])),
        ];
        SeparableMap::new(kraus).expect("nonzero Kraus operators")
    }
}

pub fn rho_nd(b: f64) -> Result<ComplexMatrix> {
    Ok(NDState::new(b)?.density())
}

pub fn rho_nd_prime(b: f64) -> Result<ComplexMatrix> {
    Ok(NDState::new(b)?.distilled())
}

pub fn quasi_reverse_map(b: f64) -> Result<SeparableMap> {
    Ok(NDState::new(b)?.quasi_reverse_map())
}

/// Bell-diagonal density for weights, re-exported for map tests.
pub fn bd_density(w: &WeightVector) -> ComplexMatrix {
    weights_to_density(w)
}
