//! Interchangeable decision procedures, registered by name.

use crate::bell::WeightVector;
use crate::convertibility::{
    can_convert_bd, facet_inequalities, lp_oracle_membership, monotones, synthesize_map, Conversion,
    Decision, FacetId, Monotone, Obstruction,
};
use crate::error::{Error, Result};
use crate::numerics::{Membership, Tolerances};
use crate::separability::{is_separable, lp_membership, most_interpretable_violation, SeparabilityCertificate};
use crate::symmetric::RMatrix;

pub trait Named {
    /// Unique name, as selected on the command line.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;
}

/// Named trait objects, looked up at runtime.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: Vec::new() }
    }

    pub fn register(&mut self, entry: Box<T>) {
        assert!(self.get(entry.name()).is_err(), "duplicate {} '{}'", self.kind, entry.name());
        self.entries.push(entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

/// Decides SLOCC convertibility between ordered entangled Bell-diagonal states.
pub trait ConvertibilityStrategy: Named + Send + Sync {
    fn decide(&self, source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<Decision>;
}

/// Compare the three monotones.
pub struct MonotoneComparison;

impl Named for MonotoneComparison {
    fn name(&self) -> &'static str {
        "monotones"
    }

    fn description(&self) -> &'static str {
        "compare E1, E2, E3 by cross-multiplication"
    }
}

impl ConvertibilityStrategy for MonotoneComparison {
    fn decide(&self, source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<Decision> {
        can_convert_bd(source, target, tol)
    }
}

/// Convex membership of the target in the polytope reachable from the source.
pub struct PolytopeMembership;

impl Named for PolytopeMembership {
    fn name(&self) -> &'static str {
        "polytope"
    }

    fn description(&self) -> &'static str {
        "linear program over the vertices of the reachable polytope"
    }
}

impl ConvertibilityStrategy for PolytopeMembership {
    fn decide(&self, source: &WeightVector, target: &WeightVector, tol: &Tolerances) -> Result<Decision> {
        monotones(target)?;
        if lp_oracle_membership(source, target, tol)? {
            return Ok(Decision::Convertible(Conversion::Map(synthesize_map(source, target, tol)?)));
        }
        // Name the facet that cuts the target off.
        let facet = facet_inequalities(source)?
            .into_iter()
            .find(|f| !f.eval_weights(target))
            .ok_or_else(|| Error::InternalInconsistency("target outside the polytope but on the inside of every facet".into()))?;
        let which = match facet.id {
            FacetId::F1 => Monotone::E1,
            FacetId::F2 => Monotone::E2,
            FacetId::F3 => Monotone::E3,
        };
        let (ms, mt) = (monotones(source)?.values(), monotones(target)?.values());
        let k = which as usize;
        Ok(Decision::NotConvertible(Obstruction::Monotone { which, source: ms[k], target: mt[k] }))
    }
}

pub fn convertibility_strategies() -> Registry<dyn ConvertibilityStrategy> {
    let mut r: Registry<dyn ConvertibilityStrategy> = Registry::new("convertibility method");
    r.register(Box::new(MonotoneComparison));
    r.register(Box::new(PolytopeMembership));
    r
}

/// Decides separability of a symmetric four-qubit state across the A|B cut.
pub trait SeparabilityStrategy: Named + Send + Sync {
    fn decide(&self, r: &RMatrix, tol: &Tolerances) -> Result<SeparabilityCertificate>;
}

/// LP and witness scan, required to agree.
pub struct CrossChecked;

impl Named for CrossChecked {
    fn name(&self) -> &'static str {
        "cross-check"
    }

    fn description(&self) -> &'static str {
        "vertex LP and facet-witness scan, required to agree"
    }
}

impl SeparabilityStrategy for CrossChecked {
    fn decide(&self, r: &RMatrix, tol: &Tolerances) -> Result<SeparabilityCertificate> {
        is_separable(r, tol)
    }
}

/// Vertex LP alone; entangled states get a separating hyperplane.
pub struct VertexLp;

impl Named for VertexLp {
    fn name(&self) -> &'static str {
        "lp"
    }

    fn description(&self) -> &'static str {
        "vertex LP only; Farkas hyperplane for entangled states"
    }
}

impl SeparabilityStrategy for VertexLp {
    fn decide(&self, r: &RMatrix, tol: &Tolerances) -> Result<SeparabilityCertificate> {
        r.ensure_state(tol)?;
        Ok(match lp_membership(r, tol)? {
            Membership::Inside(c) => SeparabilityCertificate::ConvexDecomposition(
                c.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(k, &x)| (k, x)).collect(),
            ),
            Membership::Outside(f) => SeparabilityCertificate::SeparatingHyperplane(f),
        })
    }
}

/// Facet-witness scan; the LP is run only to exhibit a decomposition.
pub struct WitnessScan;

impl Named for WitnessScan {
    fn name(&self) -> &'static str {
        "witnesses"
    }

    fn description(&self) -> &'static str {
        "scan the witness orbits W0..W4; decompose by LP when none fires"
    }
}

impl SeparabilityStrategy for WitnessScan {
    fn decide(&self, r: &RMatrix, tol: &Tolerances) -> Result<SeparabilityCertificate> {
        r.ensure_state(tol)?;
        if let Some((w, value)) = most_interpretable_violation(r, tol) {
            return Ok(SeparabilityCertificate::ViolatedWitness { witness: w.clone(), value });
        }
        match lp_membership(r, tol)? {
            Membership::Inside(c) => Ok(SeparabilityCertificate::ConvexDecomposition(
                c.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(k, &x)| (k, x)).collect(),
            )),
            Membership::Outside(_) => Err(Error::InternalInconsistency(
                "no witness fires but the vertex LP finds no decomposition".into(),
            )),
        }
    }
}

pub fn separability_strategies() -> Registry<dyn SeparabilityStrategy> {
    let mut r: Registry<dyn SeparabilityStrategy> = Registry::new("separability method");
    r.register(Box::new(CrossChecked));
    r.register(Box::new(VertexLp));
    r.register(Box::new(WitnessScan));
    r
}
