//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest matrix the solver accepts.
pub const MAX_DIM: usize = 64;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column k is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// V · f(diag) · V†
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let s = f(self.values[k]);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        scaled.matmul(&self.vectors.adjoint())
    }
}

/// Full eigendecomposition of a Hermitian matrix, checked to `hermitian_tol`.
pub fn hermitian_eigensystem_tol(m: &ComplexMatrix, hermitian_tol: f64) -> Result<Eigensystem> {
    m.ensure_hermitian(hermitian_tol)?;
    if m.rows() > MAX_DIM {
        return Err(Error::DimMismatch(format!(
            "eigensolver supports up to {MAX_DIM}x{MAX_DIM}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(jacobi(m.hermitian_part()))
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Eigensystem> {
    hermitian_eigensystem_tol(m, 1e-12)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigensystem(m)?.values)
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(mut a: ComplexMatrix) -> Eigensystem {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = (1e-16 * scale).powi(2);
    let negligible = 1e-19 * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[(p, q)].norm() > negligible {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Eigensystem { values, vectors }
}

/// Annihilate a[p][q] with G = D·R, where D removes the phase of a[p][q]
/// and R is the real Jacobi rotation; A ← G†AG, V ← VG.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Hermitian matrix function via the eigendecomposition.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eigensystem(m)?.reconstruct_with(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pauli;
    use crate::numerics::matrix::ZERO;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        (&g + &g.adjoint()).scale_real(0.5)
    }

    fn check_decomposition(m: &ComplexMatrix, es: &Eigensystem) {
        let n = m.rows();
        for k in 0..n {
            let vk = es.vector(k);
            let mv = m.matvec(&vk);
            for i in 0..n {
                assert!((mv[i] - vk[i] * es.values[k]).norm() < 1e-10, "residual in column {k}");
            }
        }
        for w in es.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        let vv = es.vectors.adjoint().matmul(&es.vectors);
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
        assert!(es.reconstruct_with(|x| x).max_abs_diff(m) < 1e-9);
    }

    #[test]
    fn identity_spectrum() {
        let es = hermitian_eigensystem(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(es.values, vec![1.0; 4]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let es = hermitian_eigensystem(&pauli::x()).unwrap();
        assert!((es.values[0] + 1.0).abs() < 1e-15);
        assert!((es.values[1] - 1.0).abs() < 1e-15);
        check_decomposition(&pauli::x(), &es);
        check_decomposition(&pauli::y(), &hermitian_eigensystem(&pauli::y()).unwrap());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn random_hermitian_up_to_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[1, 2, 3, 4, 7, 16, 33, 64] {
            let m = random_hermitian(n, &mut rng);
            let es = hermitian_eigensystem(&m).unwrap();
            check_decomposition(&m, &es);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Projector of rank 2 rotated by a random unitary-ish basis change.
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        m[(0, 1)] = ZERO;
        let h = ComplexMatrix::from_rows(&[
            [C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
            [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0), C64::new(0.0, -0.5)],
            [C64::new(0.5, 0.0), C64::new(-0.5, 0.0), C64::new(0.5, 0.0), C64::new(-0.5, 0.0)],
            [C64::new(0.5, 0.0), C64::new(0.0, -0.5), C64::new(-0.5, 0.0), C64::new(0.0, 0.5)],
        ]);
        let m = m.conjugate_by(&h);
        let es = hermitian_eigensystem(&m).unwrap();
        check_decomposition(&m, &es);
        assert!((es.values[0]).abs() < 1e-14 && (es.values[3] - 1.0).abs() < 1e-14);
    }
}
