/// Every numerical threshold used by the decision procedures.
///
/// Library entry points that make a yes/no call take a `&Tolerances`;
/// `Tolerances::default()` is what the acceptance suite pins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Equalities such as "weights sum to one" or a round-trip identity.
    pub equality: f64,
    /// Slack allowed below zero when testing positive semidefiniteness of inputs.
    pub psd_slack: f64,
    /// Hermiticity check on incoming operators.
    pub hermitian: f64,
    /// A witness value below `-witness` counts as a violation; the same
    /// threshold decides entanglement from a partial-transpose spectrum.
    pub witness: f64,
    /// Phase-one residual below which a point is declared inside a hull.
    pub lp_feasibility: f64,
    /// Numerical rank cutoff on eigenvalues.
    pub rank: f64,
    /// Marginal deviation at which local filtering stops.
    pub marginal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-10,
            psd_slack: 1e-9,
            hermitian: 1e-12,
            witness: 1e-10,
            lp_feasibility: 1e-10,
            rank: 1e-9,
            marginal: 1e-10,
        }
    }
}

impl Tolerances {
    /// Override the equality threshold (the `--tol` knob of the CLI).
    pub fn with_equality(mut self, eq: f64) -> Self {
        self.equality = eq;
        self
    }
}
