//! Convex-hull membership by phase-one simplex.
//!
//! Feasibility form: find c ≥ 0 with Σ cᵢ vᵢ = q and Σ cᵢ = 1. The phase-one
//! problem minimises the sum of artificial variables with Bland's rule. When
//! the optimum is positive the final simplex multipliers give a Farkas
//! functional (h, h₀) with h·v + h₀ ≥ 0 on every vertex and h·q + h₀ < 0.

use super::tolerance::Tolerances;
use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    vertices: Vec<Vec<f64>>,
    query: Vec<f64>,
}

impl LpProblem {
    pub fn new(vertices: Vec<Vec<f64>>, query: Vec<f64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DegenerateInput("convex hull of zero vertices".into()));
        }
        let dim = query.len();
        if let Some((k, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::DimMismatch(format!(
                "vertex {k} has dimension {} but the query has {dim}",
                v.len()
            )));
        }
        let finite = vertices.iter().flatten().chain(&query).all(|x| x.is_finite());
        if !finite {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        Ok(Self { vertices, query })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn query(&self) -> &[f64] {
        &self.query
    }

    pub fn dim(&self) -> usize {
        self.query.len()
    }
}

/// Affine functional p ↦ normal·p + offset.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingFunctional {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl SeparatingFunctional {
    pub fn eval(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) + self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// Convex weights, one per vertex, in input order.
    Inside(Vec<f64>),
    Outside(SeparatingFunctional),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }

    /// Re-evaluate the certificate against the problem it came from.
    pub fn verify(&self, problem: &LpProblem, tol: &Tolerances) -> bool {
        match self {
            Membership::Inside(c) => {
                if c.len() != problem.vertices.len() || c.iter().any(|&x| x < 0.0) {
                    return false;
                }
                let sum: f64 = c.iter().sum();
                if (sum - 1.0).abs() > tol.equality {
                    return false;
                }
                let recon = combine(&problem.vertices, c, problem.dim());
                recon
                    .iter()
                    .zip(&problem.query)
                    .all(|(a, b)| (a - b).abs() <= 10.0 * tol.lp_feasibility.max(1e-10))
            }
            Membership::Outside(h) => {
                problem.vertices.iter().all(|v| h.eval(v) >= 0.0) && h.eval(&problem.query) < 0.0
            }
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(vertices: &[Vec<f64>], c: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (v, &w) in vertices.iter().zip(c) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    }
    out
}

struct Tableau {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.at(r, c);
        for j in 0..cols {
            self.a[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        self.a[r * cols + c] = 1.0;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f == 0.0 {
                continue;
            }
            for j in 0..cols {
                self.a[i * cols + j] -= f * self.a[r * cols + j];
            }
            self.a[i * cols + c] = 0.0;
            self.rhs[i] -= f * self.rhs[r];
        }
        let f = self.reduced[c];
        if f != 0.0 {
            for j in 0..cols {
                self.reduced[j] -= f * self.a[r * cols + j];
            }
            self.reduced[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// variable among ratio ties.
    fn solve(&mut self) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..self.cols).find(|&j| self.reduced[j] < -PIVOT_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let t = self.at(i, enter);
                if t <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs[i].max(0.0) / t;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-14 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && self.basis[i] < self.basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Err(Error::InternalInconsistency("phase-one objective unbounded".into()));
            };
            self.pivot(r, enter);
        }
        Err(Error::InternalInconsistency(format!("simplex exceeded {MAX_PIVOTS} pivots")))
    }
}

/// Decide whether the query lies in the convex hull of the vertices and
/// return a checkable certificate either way.
pub fn convex_membership(problem: &LpProblem, tol: &Tolerances) -> Result<Membership> {
    let n = problem.vertices.len();
    let d = problem.dim();
    let m = d + 1;
    let cols = n + m;

    let row_value = |i: usize, j: usize| -> f64 {
        if i < d {
            problem.vertices[j][i]
        } else {
            1.0
        }
    };
    let b: Vec<f64> = (0..m).map(|i| if i < d { problem.query[i] } else { 1.0 }).collect();
    let sign: Vec<f64> = b.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect();

    let mut a = vec![0.0; m * cols];
    for i in 0..m {
        for j in 0..n {
            a[i * cols + j] = sign[i] * row_value(i, j);
        }
        a[i * cols + n + i] = 1.0;
    }
    let rhs: Vec<f64> = b.iter().zip(&sign).map(|(x, s)| x * s).collect();
    let mut reduced = vec![0.0; cols];
    for (j, r) in reduced.iter_mut().enumerate().take(n) {
        *r = -(0..m).map(|i| a[i * cols + j]).sum::<f64>();
    }

    let mut t = Tableau {
        rows: m,
        cols,
        a,
        rhs,
        reduced,
        basis: (n..n + m).collect(),
    };
    t.solve()?;

    let residual: f64 = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs[i].max(0.0)).sum();
    let scale = 1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max);

    if residual <= tol.lp_feasibility * scale {
        let mut c = vec![0.0; n];
        for i in 0..m {
            if t.basis[i] < n {
                c[t.basis[i]] = t.rhs[i].max(0.0);
            }
        }
        return Ok(Membership::Inside(c));
    }

    // Multipliers of the sign-flipped system: y_i = cost_i - reduced_i on
    // the artificial columns (cost 1).
    let y: Vec<f64> = (0..m).map(|i| 1.0 - t.reduced[n + i]).collect();
    let g: Vec<f64> = y.iter().zip(&sign).map(|(yi, s)| yi * s).collect();
    let mut h = SeparatingFunctional {
        normal: g[..d].iter().map(|x| -x).collect(),
        offset: -g[d],
    };
    let norm = h.normal.iter().map(|x| x.abs()).fold(h.offset.abs(), f64::max);
    if norm > 0.0 {
        h.normal.iter_mut().for_each(|x| *x /= norm);
        h.offset /= norm;
    }
    // Lift the offset until every vertex evaluates to >= 0 exactly.
    for _ in 0..8 {
        let worst = problem.vertices.iter().map(|v| h.eval(v)).fold(f64::INFINITY, f64::min);
        if worst >= 0.0 {
            break;
        }
        h.offset += -worst + f64::EPSILON * (1.0 + h.offset.abs());
    }
    if h.eval(&problem.query) >= 0.0 {
        return Err(Error::InternalInconsistency(format!(
            "phase-one residual {residual:.3e} but no separating functional"
        )));
    }
    Ok(Membership::Outside(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis3() -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
    }

    #[test]
    fn query_equal_to_vertex() {
        let p = LpProblem::new(basis3(), vec![1.0, 0.0, 0.0]).unwrap();
        let tol = Tolerances::default();
        let m = convex_membership(&p, &tol).unwrap();
        assert_eq!(m, Membership::Inside(vec![1.0, 0.0, 0.0]));
        assert!(m.verify(&p, &tol));
    }

    #[test]
    fn centroid_is_inside() {
        let third = 1.0 / 3.0;
        let p = LpProblem::new(basis3(), vec![third; 3]).unwrap();
        let tol = Tolerances::default();
        match convex_membership(&p, &tol).unwrap() {
            Membership::Inside(c) => {
                for x in c {
                    assert!((x - third).abs() < 1e-12);
                }
            }
            other => panic!("expected inside, got {other:?}"),
        }
    }

    #[test]
    fn outside_simplex_gets_farkas_certificate() {
        let p = LpProblem::new(basis3(), vec![-0.1, 0.5, 0.6]).unwrap();
        let tol = Tolerances::default();
        let m = convex_membership(&p, &tol).unwrap();
        let Membership::Outside(h) = &m else { panic!("expected outside") };
        for v in p.vertices() {
            assert!(h.eval(v) >= 0.0);
        }
        assert!(h.eval(p.query()) < 0.0);
        assert!(m.verify(&p, &tol));
    }

    #[test]
    fn rejects_non_finite_and_mismatched() {
        assert!(matches!(
            LpProblem::new(vec![vec![f64::NAN]], vec![0.0]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            LpProblem::new(vec![vec![0.0, 1.0]], vec![0.0]),
            Err(Error::DimMismatch(_))
        ));
        assert!(matches!(LpProblem::new(vec![], vec![0.0]), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn duplicated_and_degenerate_vertices() {
        let v = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0]];
        let tol = Tolerances::default();
        let inside = LpProblem::new(v.clone(), vec![0.25, 0.0]).unwrap();
        assert!(convex_membership(&inside, &tol).unwrap().verify(&inside, &tol));
        let off_line = LpProblem::new(v, vec![0.25, 1e-6]).unwrap();
        let m = convex_membership(&off_line, &tol).unwrap();
        assert!(!m.is_inside() && m.verify(&off_line, &tol));
    }

    fn sound_on_random(dim: usize, nv: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol = Tolerances::default();
        let mut inside = 0;
        for k in 0..1000 {
            let verts: Vec<Vec<f64>> = (0..nv)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let q: Vec<f64> = if k % 2 == 0 {
                let w: Vec<f64> = (0..nv).map(|_| rng.random::<f64>()).collect();
                let s: f64 = w.iter().sum();
                combine(&verts, &w.iter().map(|x| x / s).collect::<Vec<_>>(), dim)
            } else {
                (0..dim).map(|_| rng.random_range(-0.6..0.6)).collect()
            };
            let p = LpProblem::new(verts, q).unwrap();
            let m = convex_membership(&p, &tol).unwrap();
            assert!(m.verify(&p, &tol), "certificate failed: {m:?}");
            inside += m.is_inside() as usize;
        }
        assert!(inside >= 500 && inside < 1000, "degenerate sample: {inside} inside");
    }

    #[test]
    fn sound_on_random_r4() {
        sound_on_random(4, 12, 1);
    }

    #[test]
    fn sound_on_random_r16() {
        sound_on_random(16, 60, 2);
    }
}
