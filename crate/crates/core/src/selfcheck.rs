//! Built-in numerical checks of the library's mathematical claims.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::bell::{canonical_order, is_entangled_bd, WeightVector};
use crate::choi::{apply_map_density, cj_rmatrix, kraus_for_vertex, NDState};
use crate::convertibility::{lp_oracle_membership, monotones};
use crate::error::Result;
use crate::numerics::{hermitian_eigenvalues, Tolerances};
use crate::separability::{
    extension_operator_w2, seesaw_min_product, symmetric_projector_4x4, vertex_set,
    verify_extension_certificate_w2, WitnessFamily,
};
use crate::strategy::{Named, Registry};
use crate::symmetric::{assemble, QubitOrdering, RMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

pub trait SelfCheck: Named + Send + Sync {
    fn run(&self, seed: u64, tol: &Tolerances) -> Result<CheckOutcome>;
}

/// Uniform on the simplex, sorted descending, conditioned on λ₁ > 1/2.
pub fn random_ordered_entangled(rng: &mut impl Rng) -> WeightVector {
    loop {
        let e: [f64; 4] = std::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
        let Ok(w) = WeightVector::normalized(e) else { continue };
        let (w, _) = canonical_order(&w);
        if is_entangled_bd(&w) {
            return w;
        }
    }
}

pub struct WitnessSeesaw {
    pub restarts: usize,
}

impl Named for WitnessSeesaw {
    fn name(&self) -> &'static str {
        "witness-seesaw"
    }

    fn description(&self) -> &'static str {
        "product-state minimum of W1..W4 is nonnegative; a negative control is not"
    }
}

impl SelfCheck for WitnessSeesaw {
    fn run(&self, seed: u64, _tol: &Tolerances) -> Result<CheckOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut passed = true;
        let mut parts = Vec::new();
        for family in &WitnessFamily::ALL[1..] {
            let z = assemble(&family.canonical(), QubitOrdering::Cut);
            let m = seesaw_min_product(&z, self.restarts, &mut rng)?.min;
            passed &= m >= -1e-8;
            parts.push(format!("{family} min {m:.3e}"));
        }
        let control = assemble(&RMatrix::unit(3, 0).scaled(-1.0), QubitOrdering::Cut);
        let m = seesaw_min_product(&control, self.restarts, &mut rng)?.min;
        passed &= m <= -0.2;
        parts.push(format!("control min {m:.4}"));
        Ok(CheckOutcome { passed, detail: parts.join(", ") })
    }
}

pub struct ExtensionCertificate;

impl Named for ExtensionCertificate {
    fn name(&self) -> &'static str {
        "extension-w2"
    }

    fn description(&self) -> &'static str {
        "two-copy symmetric extension identity certifying W2"
    }
}

impl SelfCheck for ExtensionCertificate {
    fn run(&self, _seed: u64, _tol: &Tolerances) -> Result<CheckOutcome> {
        let zmin = hermitian_eigenvalues(&extension_operator_w2())?[0];
        let rank = hermitian_eigenvalues(&symmetric_projector_4x4())?
            .iter()
            .filter(|&&e| e > 0.5)
            .count();
        let (passed_identity, detail) = match verify_extension_certificate_w2(1e-10) {
            Ok(r) => (true, format!("residual {:.2e} with encoding {}", r.residual, r.matched.name)),
            Err(e) => (false, e.to_string()),
        };
        Ok(CheckOutcome {
            passed: passed_identity && zmin >= -1e-12 && rank == 10,
            detail: format!("{detail}; min eig {zmin:.2e}; projector rank {rank}"),
        })
    }
}

pub struct QuasiReverse;

impl Named for QuasiReverse {
    fn name(&self) -> &'static str {
        "quasi-reverse"
    }

    fn description(&self) -> &'static str {
        "two-term product map takes the distilled state back to the non-diagonal one"
    }
}

impl SelfCheck for QuasiReverse {
    fn run(&self, _seed: u64, _tol: &Tolerances) -> Result<CheckOutcome> {
        let mut worst = 0.0_f64;
        let mut probs = Vec::new();
        for b in [0.0, 0.1, 0.25, 0.4, 0.5] {
            let nd = NDState::new(b)?;
            let (out, p) = apply_map_density(&nd.quasi_reverse_map(), &nd.distilled())?;
            worst = worst.max(out.max_abs_diff(&nd.density()));
            probs.push(format!("{p:.4}"));
        }
        Ok(CheckOutcome {
            passed: worst <= 1e-10,
            detail: format!("max deviation {worst:.2e}; success probabilities [{}]", probs.join(", ")),
        })
    }
}

pub struct MonotoneLpSweep {
    pub samples: usize,
}

impl Named for MonotoneLpSweep {
    fn name(&self) -> &'static str {
        "monotones-vs-lp"
    }

    fn description(&self) -> &'static str {
        "monotone decision equals polytope membership on random pairs"
    }
}

impl SelfCheck for MonotoneLpSweep {
    fn run(&self, seed: u64, tol: &Tolerances) -> Result<CheckOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut disagreements = 0;
        let mut yes = 0;
        for _ in 0..self.samples {
            let (s, t) = (random_ordered_entangled(&mut rng), random_ordered_entangled(&mut rng));
            let by_monotones = monotones(&s)?.dominates(&monotones(&t)?);
            let by_lp = lp_oracle_membership(&s, &t, tol)?;
            disagreements += usize::from(by_monotones != by_lp);
            yes += usize::from(by_lp);
        }
        Ok(CheckOutcome {
            passed: disagreements == 0,
            detail: format!("{disagreements} disagreements in {} pairs ({yes} convertible)", self.samples),
        })
    }
}

pub struct VertexMaps;

impl Named for VertexMaps {
    fn name(&self) -> &'static str {
        "vertex-maps"
    }

    fn description(&self) -> &'static str {
        "Kraus realization of every vertex projects back onto it"
    }
}

impl SelfCheck for VertexMaps {
    fn run(&self, _seed: u64, tol: &Tolerances) -> Result<CheckOutcome> {
        let mut worst = 0.0_f64;
        for v in vertex_set() {
            let back = cj_rmatrix(&kraus_for_vertex(&v.r)?, tol)?;
            worst = worst.max(back.max_abs_diff(&v.r));
        }
        Ok(CheckOutcome {
            passed: worst <= 1e-10,
            detail: format!("{} vertices, max deviation {worst:.2e}", vertex_set().len()),
        })
    }
}

pub fn self_checks() -> Registry<dyn SelfCheck> {
    let mut r: Registry<dyn SelfCheck> = Registry::new("self-check");
    r.register(Box::new(WitnessSeesaw { restarts: 200 }));
    r.register(Box::new(ExtensionCertificate));
    r.register(Box::new(QuasiReverse));
    r.register(Box::new(MonotoneLpSweep { samples: 2000 }));
    r.register(Box::new(VertexMaps));
    r
}
