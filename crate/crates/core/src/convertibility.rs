//! SLOCC convertibility between ordered entangled Bell-diagonal states:
//! the monotones E₁–E₃, the target polytope P_λ, and converting maps.

use std::fmt;

use crate::bell::{is_entangled_bd, CorrelationCoords, WeightVector};
use crate::choi::map_action_bd;
use crate::error::{Error, Result};
use crate::numerics::{convex_membership, LpProblem, Membership, Tolerances};
use crate::separability::{is_separable, D0, G0};
use crate::symmetric::{invert, RMatrix, IDENTITY_PERMUTATION};

/// Relative slack allowed when comparing monotones (ties count as convertible).
const TIE: f64 = 1e-12;

/// num/den with num, den ≥ 0 and not both zero; den = 0 means +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub num: f64,
    pub den: f64,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        if self.den == 0.0 {
            f64::INFINITY
        } else {
            self.num / self.den
        }
    }

    /// self ≥ other by cross-multiplication, ties within `TIE`.
    pub fn ge(&self, other: &Ratio) -> bool {
        let lhs = self.num * other.den;
        let rhs = other.num * self.den;
        lhs - rhs >= -TIE * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0.0 {
            write!(f, "{}/0 = inf", self.num)
        } else {
            write!(f, "{}/{} = {}", self.num, self.den, self.value())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotone {
    E1,
    E2,
    E3,
}

impl fmt::Display for Monotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneTriple {
    pub e1: f64,
    /// (1 − 2λ₂)/(λ₃ + λ₄)
    pub e2: Ratio,
    /// (1 − 2λ₂ − 2λ₃)/λ₄
    pub e3: Ratio,
}

impl MonotoneTriple {
    pub fn values(&self) -> [f64; 3] {
        [self.e1, self.e2.value(), self.e3.value()]
    }

    /// First monotone on which `self` falls below `target`.
    pub fn first_deficit(&self, target: &MonotoneTriple) -> Option<Monotone> {
        let e1_ok = self.e1 - target.e1 >= -TIE * self.e1.max(target.e1);
        if !e1_ok {
            Some(Monotone::E1)
        } else if !self.e2.ge(&target.e2) {
            Some(Monotone::E2)
        } else if !self.e3.ge(&target.e3) {
            Some(Monotone::E3)
        } else {
            None
        }
    }

    pub fn dominates(&self, target: &MonotoneTriple) -> bool {
        self.first_deficit(target).is_none()
    }
}

pub fn ensure_ordered_entangled(w: &WeightVector) -> Result<()> {
    w.ensure_ordered()?;
    if !is_entangled_bd(w) {
        return Err(Error::NotEntangled(w.get(0)));
    }
    Ok(())
}

pub fn monotones(w: &WeightVector) -> Result<MonotoneTriple> {
    ensure_ordered_entangled(w)?;
    let [l1, l2, l3, l4] = *w.as_array();
    Ok(MonotoneTriple {
        e1: l1,
        e2: Ratio {
            num: l1 - l2 + l3 + l4,
            den: l3 + l4,
        },
        e3: Ratio {
            num: l1 - l2 - l3 + l4,
            den: l4,
        },
    })
}

/// A converting map: r in the cone of separable symmetric states (unit
/// entry sum) with rλ ∝ λ′.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvertingMap {
    pub r: RMatrix,
    /// ‖rλ‖₁ for the unit-sum r.
    pub success_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Conversion {
    Map(ConvertingMap),
    /// Any separable target is reachable by local preparation.
    SeparableTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction {
    Monotone { which: Monotone, source: f64, target: f64 },
    SeparableSource,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Monotone { which, source, target } => {
                write!(f, "{which} decreases: source {source} < target {target}")
            }
            Self::SeparableSource => write!(f, "separable source cannot reach an entangled target"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Convertible(Conversion),
    NotConvertible(Obstruction),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Convertible(_))
    }
}

fn monotone_value(t: &MonotoneTriple, m: Monotone) -> f64 {
    match m {
        Monotone::E1 => t.e1,
        Monotone::E2 => t.e2.value(),
        Monotone::E3 => t.e3.value(),
    }
}

/// Decide λ → λ′ from the monotones; a yes carries a synthesized map.
pub fn can_convert_bd(source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<Decision> {
    let (ms, mt) = (monotones(source)?, monotones(target)?);
    match ms.first_deficit(&mt) {
        Some(which) => Ok(Decision::NotConvertible(Obstruction::Monotone {
            which,
            source: monotone_value(&ms, which),
            target: monotone_value(&mt, which),
        })),
        None => Ok(Decision::Convertible(Conversion::Map(synthesize_map(source, target, tol)?))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PVertexLabel {
    /// λ itself.
    Source,
    /// ½(Φ₀ + Φᵢ), i ∈ {1,2,3}.
    Separable(usize),
    /// λ with its last three weights rearranged; `tail[k]` is the source
    /// slot placed in slot k + 1.
    Permuted { tail: [usize; 3] },
}

impl PVertexLabel {
    /// Full permutation p with vertex[k] = λ[p[k]] (permutation labels only).
    fn permutation(&self) -> Option<[usize; 4]> {
        match self {
            Self::Source => Some(IDENTITY_PERMUTATION),
            Self::Permuted { tail } => Some([0, tail[0], tail[1], tail[2]]),
            Self::Separable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLambdaPolytope {
    pub vertices: Vec<(PVertexLabel, WeightVector)>,
}

impl PLambdaPolytope {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn problem(&self, query: &WeightVector) -> Result<LpProblem> {
        LpProblem::new(
            self.vertices.iter().map(|(_, v)| v.as_array().to_vec()).collect(),
            query.as_array().to_vec(),
        )
    }
}

/// Slot arrangements of (λ₂, λ₃, λ₄) for the five non-trivial permutations.
const TAILS: [[usize; 3]; 5] = [[1, 3, 2], [2, 3, 1], [3, 2, 1], [3, 1, 2], [2, 1, 3]];

/// Vertices of P_λ, the set of Bell-diagonal states reachable from λ.
pub fn plambda_vertices(w: &WeightVector) -> Result<PLambdaPolytope> {
    ensure_ordered_entangled(w)?;
    let mut vertices = vec![(PVertexLabel::Source, *w)];
    for i in 1..4 {
        let mut s = [0.0; 4];
        s[0] = 0.5;
        s[i] = 0.5;
        vertices.push((PVertexLabel::Separable(i), WeightVector::new(s)?));
    }
    for tail in TAILS {
        let label = PVertexLabel::Permuted { tail };
        let v = w.permuted(&label.permutation().unwrap());
        if !vertices.iter().any(|(_, u)| *u == v) {
            vertices.push((label, v));
        }
    }
    Ok(PLambdaPolytope { vertices })
}

/// Convex membership of λ′ in P_λ: the geometric decision procedure.
pub fn lp_oracle_membership(source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<bool> {
    let poly = plambda_vertices(source)?;
    let problem = poly.problem(target)?;
    Ok(convex_membership(&problem, tol)?.is_inside())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetValue {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FacetId {
    F1,
    F2,
    F3,
}

/// One facet of P_λ through λ, as `lhs(λ′) ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub id: FacetId,
    source: WeightVector,
    /// Coefficient in the coordinate form (1 for F₁); NaN when degenerate.
    coefficient: f64,
    pub degenerate: bool,
}

impl Facet {
    /// Correlation-coordinate form, with ⟨σσ⟩ = −(x, y, z).
    pub fn eval_coords(&self, p: &CorrelationCoords) -> FacetValue {
        let (xx, yy, zz) = (-p.x, -p.y, -p.z);
        let (lhs, rhs) = match self.id {
            FacetId::F1 => ((1.0 + xx - yy + zz) / 4.0, self.source.get(0)),
            FacetId::F2 => (self.coefficient * (xx - yy) + zz, 1.0),
            FacetId::F3 => (xx + zz - self.coefficient * yy, 1.0),
        };
        FacetValue {
            lhs,
            rhs,
            satisfied: lhs <= rhs + 1e-12,
        }
    }

    /// Weight form: the corresponding monotone comparison.
    pub fn eval_weights(&self, target: &WeightVector) -> bool {
        let [l1, l2, l3, l4] = *self.source.as_array();
        let [m1, m2, m3, m4] = *target.as_array();
        match self.id {
            FacetId::F1 => m1 <= l1 + TIE,
            FacetId::F2 => Ratio { num: l1 - l2 + l3 + l4, den: l3 + l4 }
                .ge(&Ratio { num: 1.0 - 2.0 * m2, den: m3 + m4 }),
            FacetId::F3 => Ratio { num: l1 - l2 - l3 + l4, den: l4 }
                .ge(&Ratio { num: 1.0 - 2.0 * m2 - 2.0 * m3, den: m4 }),
        }
    }
}

pub fn facet_inequalities(w: &WeightVector) -> Result<[Facet; 3]> {
    ensure_ordered_entangled(w)?;
    let [l1, l2, l3, l4] = *w.as_array();
    let d2 = l1 - l2;
    let d3 = 1.0 - 2.0 * l2 - 2.0 * l3;
    let f2_degenerate = d2.abs() <= TIE;
    let f3_degenerate = d3.abs() <= TIE;
    Ok([
        Facet { id: FacetId::F1, source: *w, coefficient: 1.0, degenerate: false },
        Facet {
            id: FacetId::F2,
            source: *w,
            coefficient: if f2_degenerate { f64::NAN } else { (l3 + l4) / d2 },
            degenerate: f2_degenerate,
        },
        Facet {
            id: FacetId::F3,
            source: *w,
            coefficient: if f3_degenerate { f64::NAN } else { (1.0 - 2.0 * l1 + 2.0 * l4) / d3 },
            degenerate: f3_degenerate,
        },
    ])
}

/// Vertex map realizing one P_λ vertex and its success weight ‖rλ‖₁.
fn vertex_map(label: &PVertexLabel, w: &WeightVector) -> (RMatrix, f64) {
    match label.permutation() {
        // r[k][p[k]] = 1/4 sends weight λ[p[k]] to slot k.
        Some(p) => (D0.permute(&IDENTITY_PERMUTATION, &invert(&p)), 0.25),
        None => {
            let PVertexLabel::Separable(i) = *label else { unreachable!() };
            // Rows {0, i}, columns {0, 1}.
            let mut rows = IDENTITY_PERMUTATION;
            rows.swap(1, i);
            (G0.permute(&rows, &IDENTITY_PERMUTATION), (w.get(0) + w.get(1)) / 2.0)
        }
    }
}

/// An r in the separable cone with rλ ∝ λ′, assembled from the P_λ vertex
/// decomposition of λ′.
pub fn synthesize_map(source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<ConvertingMap> {
    let poly = plambda_vertices(source)?;
    let problem = poly.problem(target)?;
    let coeffs = match convex_membership(&problem, tol)? {
        Membership::Inside(c) => c,
        Membership::Outside(_) => return Err(Error::NotConvertible),
    };
    let mut r = RMatrix::zeros();
    for ((label, _), &c) in poly.vertices.iter().zip(&coeffs) {
        if c > 0.0 {
            let (rk, wk) = vertex_map(label, source);
            r = r.add(&rk.scaled(c / wk));
        }
    }
    let r = r.normalized()?;
    let (image, success_weight) = map_action_bd(&r, source)?;
    if image.max_abs_diff(target) > 1e-10 {
        return Err(Error::InternalInconsistency(format!(
            "synthesized map sends λ to {image:?}, not {target:?}"
        )));
    }
    if !is_separable(&r, tol)?.is_separable() {
        return Err(Error::InternalInconsistency("synthesized map is not separable".into()));
    }
    Ok(ConvertingMap { r, success_weight })
}
