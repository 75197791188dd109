//! The separable polytope of symmetric four-qubit states: its 60 vertices,
//! its facet witnesses, LP membership, and numerical witness validation.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::matrix::{normalize, ComplexMatrix, C64};
use crate::numerics::{
    convex_membership, hermitian_eigensystem, kron, partial_transpose, LpProblem, Membership,
    SeparatingFunctional, Tolerances,
};
use crate::symmetric::{all_permutations, assemble, reorder_qubits, BellPermutation, QubitOrdering, RMatrix, IDENTITY_PERMUTATION};

const Q: f64 = 0.25;

/// (1/4)·I: the Bell-dephased, locally permutable vertex.
pub const D0: RMatrix = RMatrix::new([
    [Q, 0.0, 0.0, 0.0],
    [0.0, Q, 0.0, 0.0],
    [0.0, 0.0, Q, 0.0],
    [0.0, 0.0, 0.0, Q],
]);

/// Uniform 2×2 block on Bell indices {0,1}×{0,1}.
pub const G0: RMatrix = RMatrix::new([
    [Q, Q, 0.0, 0.0],
    [Q, Q, 0.0, 0.0],
    [0.0; 4],
    [0.0; 4],
]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    D0,
    G0,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub r: RMatrix,
    pub kind: VertexKind,
    pub row_perm: BellPermutation,
    pub col_perm: BellPermutation,
}

fn orbit(canonical: &RMatrix) -> Vec<(RMatrix, BellPermutation, BellPermutation)> {
    let mut out: Vec<(RMatrix, BellPermutation, BellPermutation)> = Vec::new();
    for p in all_permutations() {
        for q in all_permutations() {
            let m = canonical.permute(p, q);
            if !out.iter().any(|(o, _, _)| *o == m) {
                out.push((m, *p, *q));
            }
        }
    }
    out
}

/// The D₀ orbit (24) followed by the G₀ orbit (36). Both generators are
/// symmetric, so the set is also closed under transposition.
pub fn vertex_set() -> &'static [Vertex] {
    static SET: OnceLock<Vec<Vertex>> = OnceLock::new();
    SET.get_or_init(|| {
        [(D0, VertexKind::D0), (G0, VertexKind::G0)]
            .iter()
            .flat_map(|(c, kind)| {
                orbit(c).into_iter().map(move |(r, row_perm, col_perm)| Vertex {
                    r,
                    kind: *kind,
                    row_perm,
                    col_perm,
                })
            })
            .collect()
    })
}

fn vertex_coordinates() -> &'static Vec<Vec<f64>> {
    static COORDS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    COORDS.get_or_init(|| vertex_set().iter().map(|v| v.r.to_vec()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessFamily {
    W0,
    W1,
    W2,
    W3,
    W4,
}

impl WitnessFamily {
    pub const ALL: [WitnessFamily; 5] = [Self::W0, Self::W1, Self::W2, Self::W3, Self::W4];

    pub fn canonical(self) -> RMatrix {
        match self {
            Self::W0 => RMatrix::unit(0, 0),
            Self::W1 => RMatrix::new([
                [1.0, 1.0, 1.0, -1.0],
                [1.0, 1.0, 1.0, -1.0],
                [1.0, 1.0, 1.0, -1.0],
                [-1.0, -1.0, -1.0, 1.0],
            ]),
            Self::W2 => RMatrix::new([
                [1.0, 1.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            Self::W3 => RMatrix::new([
                [3.0, 3.0, 1.0, -1.0],
                [3.0, -1.0, 1.0, 3.0],
                [1.0, 1.0, 3.0, 1.0],
                [-1.0, -1.0, 1.0, -1.0],
            ]),
            Self::W4 => RMatrix::new([
                [3.0, 3.0, 1.0, -1.0],
                [3.0, -1.0, 1.0, 3.0],
                [3.0, -1.0, 1.0, -1.0],
                [1.0, 1.0, -1.0, 1.0],
            ]),
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A facet functional: `matrix = base.permute(row_perm, col_perm)` where
/// `base` is the family's canonical matrix, transposed when `transposed`.
/// Transposition swaps the two copies, a local unitary across the cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub matrix: RMatrix,
    pub family: WitnessFamily,
    pub transposed: bool,
    pub row_perm: BellPermutation,
    pub col_perm: BellPermutation,
}

impl Witness {
    pub fn canonical(family: WitnessFamily) -> Self {
        Self {
            matrix: family.canonical(),
            family,
            transposed: false,
            row_perm: IDENTITY_PERMUTATION,
            col_perm: IDENTITY_PERMUTATION,
        }
    }

    pub fn value(&self, r: &RMatrix) -> f64 {
        witness_value(self, r)
    }
}

impl Witness {
    /// Rebuild the matrix from the family and the orbit bookkeeping.
    pub fn reconstruct(&self) -> RMatrix {
        let base = self.family.canonical();
        let base = if self.transposed { base.transpose() } else { base };
        base.permute(&self.row_perm, &self.col_perm)
    }
}

/// All distinct images of W₀..W₄ under row/column permutations and
/// transposition, family by family.
pub fn witness_orbit() -> &'static [Witness] {
    static ORBIT: OnceLock<Vec<Witness>> = OnceLock::new();
    ORBIT.get_or_init(|| {
        let mut out: Vec<Witness> = Vec::new();
        for family in WitnessFamily::ALL {
            let c = family.canonical();
            for (base, transposed) in [(c, false), (c.transpose(), true)] {
                for (matrix, row_perm, col_perm) in orbit(&base) {
                    if !out.iter().any(|w| w.family == family && w.matrix == matrix) {
                        out.push(Witness { matrix, family, transposed, row_perm, col_perm });
                    }
                }
            }
        }
        out
    })
}

pub fn family_size(family: WitnessFamily) -> usize {
    witness_orbit().iter().filter(|w| w.family == family).count()
}

/// Σᵢⱼ Wᵢⱼ rᵢⱼ = tr[Z_W ρ_r].
pub fn witness_value(w: &Witness, r: &RMatrix) -> f64 {
    w.matrix.pair(r)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparabilityCertificate {
    /// (index into `vertex_set()`, weight) with positive weights.
    ConvexDecomposition(Vec<(usize, f64)>),
    ViolatedWitness { witness: Witness, value: f64 },
    /// Affine functional nonnegative on every vertex and negative on r.
    SeparatingHyperplane(SeparatingFunctional),
}

impl SeparabilityCertificate {
    pub fn is_separable(&self) -> bool {
        matches!(self, Self::ConvexDecomposition(_))
    }

    pub fn reconstruct(terms: &[(usize, f64)]) -> RMatrix {
        let vs = vertex_set();
        terms.iter().fold(RMatrix::zeros(), |acc, &(k, c)| acc.add(&vs[k].r.scaled(c)))
    }

    /// Re-check the certificate against `r` from scratch.
    pub fn verify(&self, r: &RMatrix, tol: &Tolerances) -> bool {
        match self {
            Self::ConvexDecomposition(terms) => {
                let sum: f64 = terms.iter().map(|t| t.1).sum();
                terms.iter().all(|&(k, c)| c >= 0.0 && k < vertex_set().len())
                    && (sum - 1.0).abs() <= 1e-9
                    && Self::reconstruct(terms).max_abs_diff(r) <= 1e-9
            }
            Self::ViolatedWitness { witness, value } => {
                witness.reconstruct() == witness.matrix
                    && witness_value(witness, r) < -tol.witness
                    && (witness_value(witness, r) - value).abs() <= 1e-12
            }
            Self::SeparatingHyperplane(f) => {
                vertex_coordinates().iter().all(|v| f.eval(v) >= 0.0) && f.eval(&r.to_vec()) < 0.0
            }
        }
    }
}

/// First witness (in W₀→W₄ orbit order) with value below −tol.witness.
pub fn most_interpretable_violation(r: &RMatrix, tol: &Tolerances) -> Option<(&'static Witness, f64)> {
    witness_orbit()
        .iter()
        .map(|w| (w, witness_value(w, r)))
        .find(|(_, v)| *v < -tol.witness)
}

/// Convex-hull membership over the vertex set, without the witness scan.
pub fn lp_membership(r: &RMatrix, tol: &Tolerances) -> Result<Membership> {
    let problem = LpProblem::new(vertex_coordinates().clone(), r.to_vec())?;
    let m = convex_membership(&problem, tol)?;
    if !m.verify(&problem, tol) {
        return Err(Error::InternalInconsistency("LP certificate failed verification".into()));
    }
    Ok(m)
}

/// Decide separability by LP and cross-check with the witness scan.
pub fn is_separable(r: &RMatrix, tol: &Tolerances) -> Result<SeparabilityCertificate> {
    r.ensure_state(tol)?;
    let lp = lp_membership(r, tol)?;
    let violation = most_interpretable_violation(r, tol);
    match (lp, violation) {
        (Membership::Inside(coeffs), None) => {
            let terms = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0.0)
                .map(|(k, &c)| (k, c))
                .collect();
            Ok(SeparabilityCertificate::ConvexDecomposition(terms))
        }
        (Membership::Outside(_), Some((w, value))) => Ok(SeparabilityCertificate::ViolatedWitness {
            witness: w.clone(),
            value,
        }),
        (Membership::Inside(_), Some((w, value))) => Err(Error::InternalInconsistency(format!(
            "LP finds a decomposition but {} witness takes value {value:e}",
            w.family
        ))),
        (Membership::Outside(f), None) => Err(Error::InternalInconsistency(format!(
            "LP separates the state (functional value {:e}) but no facet witness is violated",
            f.eval(&r.to_vec())
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub min: f64,
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
}

const SEESAW_SWEEPS: usize = 500;
const SEESAW_DELTA: f64 = 1e-12;

/// ⟨β|Z|β⟩ contracted over the second ℂ⁴ factor (or over the first when `over_first`).
fn contract(z: &ComplexMatrix, v: &[C64], over_first: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..4 {
            for l in 0..4 {
                let (r, c) = if over_first { (4 * k + i, 4 * l + j) } else { (4 * i + k, 4 * j + l) };
                s += v[k].conj() * z[(r, c)] * v[l];
            }
        }
        s
    })
}

fn random_unit(rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..4)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut v);
    v
}

/// Upper bound on min ⟨αβ|Z|αβ⟩ over product unit vectors in ℂ⁴⊗ℂ⁴ by
/// alternating minimal-eigenvector updates.
pub fn seesaw_min_product(z: &ComplexMatrix, restarts: usize, rng: &mut impl Rng) -> Result<SeesawResult> {
    if z.rows() != 16 || z.cols() != 16 {
        return Err(Error::DimMismatch(format!("expected 16x16, got {}x{}", z.rows(), z.cols())));
    }
    z.ensure_hermitian(1e-12 * z.max_abs().max(1.0))?;
    let mut best: Option<SeesawResult> = None;
    for _ in 0..restarts.max(1) {
        let mut beta = random_unit(rng);
        let mut alpha = vec![C64::new(0.0, 0.0); 4];
        let mut value = f64::INFINITY;
        for _ in 0..SEESAW_SWEEPS {
            let ea = hermitian_eigensystem(&contract(z, &beta, false).hermitian_part())?;
            alpha = ea.vector(0);
            let eb = hermitian_eigensystem(&contract(z, &alpha, true).hermitian_part())?;
            beta = eb.vector(0);
            let delta = value - eb.min();
            value = eb.min();
            if delta.abs() < SEESAW_DELTA {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| value < b.min) {
            best = Some(SeesawResult { min: value, alpha, beta });
        }
    }
    Ok(best.expect("at least one restart"))
}

/// A qubit-to-qudit encoding: qubit order (natural positions) that makes the
/// cut operator (A qudit)⊗(B qudit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuditEncoding {
    pub name: &'static str,
    pub qubit_order: [usize; 4],
}

pub const ENCODINGS: [QuditEncoding; 4] = [
    QuditEncoding { name: "A'-msb,B'-msb", qubit_order: [0, 2, 1, 3] },
    QuditEncoding { name: "A''-msb,B'-msb", qubit_order: [2, 0, 1, 3] },
    QuditEncoding { name: "A'-msb,B''-msb", qubit_order: [0, 2, 3, 1] },
    QuditEncoding { name: "A''-msb,B''-msb", qubit_order: [2, 0, 3, 1] },
];

/// Terms (sign, a₁, a₂, b) of the four vectors whose projectors build 𝒵₂.
const Z_VECTORS: [[(f64, usize, usize, usize); 6]; 4] = [
    [(1.0, 0, 1, 0), (-1.0, 0, 2, 3), (1.0, 1, 1, 1), (1.0, 1, 3, 3), (1.0, 2, 2, 1), (1.0, 2, 3, 0)],
    [(1.0, 1, 0, 3), (1.0, 1, 1, 2), (1.0, 2, 0, 0), (1.0, 2, 2, 2), (-1.0, 3, 1, 0), (1.0, 3, 2, 3)],
    [(1.0, 0, 0, 0), (1.0, 0, 2, 2), (1.0, 1, 0, 1), (-1.0, 1, 3, 2), (1.0, 3, 2, 1), (1.0, 3, 3, 0)],
    [(1.0, 0, 0, 3), (1.0, 0, 1, 2), (-1.0, 2, 0, 1), (1.0, 2, 3, 2), (1.0, 3, 1, 1), (1.0, 3, 3, 3)],
];

/// 𝒵₂ = ½Σ|zᵢ⟩⟨zᵢ| on ℂ⁴(A₁)⊗ℂ⁴(A₂)⊗ℂ⁴(B), index a₁·16 + a₂·4 + b.
pub fn extension_operator_w2() -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(64, 64);
    for terms in &Z_VECTORS {
        let mut v = vec![C64::new(0.0, 0.0); 64];
        for &(c, a1, a2, b) in terms {
            v[a1 * 16 + a2 * 4 + b] += c;
        }
        z = &z + &ComplexMatrix::projector(&v).scale_real(0.5);
    }
    z
}

/// Projector onto the symmetric subspace of ℂ⁴⊗ℂ⁴.
pub fn symmetric_projector_4x4() -> ComplexMatrix {
    ComplexMatrix::from_fn(16, 16, |r, c| {
        let (i, j) = (r / 4, r % 4);
        let (k, l) = (c / 4, c % 4);
        let id = if (i, j) == (k, l) { 0.5 } else { 0.0 };
        let swap = if (i, j) == (l, k) { 0.5 } else { 0.0 };
        C64::new(id + swap, 0.0)
    })
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    /// Residual max|L − R| for each encoding in `ENCODINGS` order.
    pub residuals: Vec<(QuditEncoding, f64)>,
    pub matched: QuditEncoding,
    pub residual: f64,
}

/// Check π(I⊗Z_W₂)π = π(𝒵₂^{T_A₁})π with π = π_A⊗I on (A₁,A₂,B).
pub fn verify_extension_certificate_w2(tol: f64) -> Result<ExtensionReport> {
    let zcal = extension_operator_w2();
    let pi = kron(&symmetric_projector_4x4(), &ComplexMatrix::identity(4));
    let rhs = partial_transpose(&zcal, &[4, 4, 4], 0)?.conjugate_by(&pi);
    let natural = assemble(&WitnessFamily::W2.canonical(), QubitOrdering::Natural);
    let residuals: Vec<(QuditEncoding, f64)> = ENCODINGS
        .iter()
        .map(|enc| {
            let zw = reorder_qubits(&natural, &enc.qubit_order);
            let lhs = kron(&ComplexMatrix::identity(4), &zw).conjugate_by(&pi);
            (*enc, lhs.max_abs_diff(&rhs))
        })
        .collect();
    let (matched, residual) = residuals
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty encoding list");
    if residual > tol {
        return Err(Error::NoEncodingMatches(residuals.iter().map(|r| r.1).collect()));
    }
    Ok(ExtensionReport { residuals, matched, residual })
}
