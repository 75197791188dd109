//! Tensor-product bookkeeping on dense operators.
//!
//! Subsystem 0 is the most significant digit of the composite index
//! (big-endian), matching `kron(A, B)` with `A` on subsystem 0.

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total || dims.is_empty() {
        return Err(Error::DimMismatch(format!(
            "subsystem dims {dims:?} (product {total}) vs {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn split(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

fn join(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Transpose on one tensor factor.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if subsystem >= dims.len() {
        return Err(Error::DimMismatch(format!(
            "subsystem {subsystem} out of range for {} factors",
            dims.len()
        )));
    }
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut ri = vec![0; dims.len()];
    let mut ci = vec![0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            split(i, dims, &mut ri);
            split(j, dims, &mut ci);
            std::mem::swap(&mut ri[subsystem], &mut ci[subsystem]);
            out[(join(&ri, dims), join(&ci, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Trace out every subsystem not listed in `keep`; kept factors retain
/// their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimMismatch(format!("kept subsystems {keep:?} out of range")));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let out_n: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(out_n, out_n);
    let n = m.rows();
    let mut ri = vec![0; dims.len()];
    let mut ci = vec![0; dims.len()];
    let mut rk = vec![0; kept.len()];
    let mut ck = vec![0; kept.len()];
    for i in 0..n {
        split(i, dims, &mut ri);
        for j in 0..n {
            let z = m[(i, j)];
            if z == ZERO {
                continue;
            }
            split(j, dims, &mut ci);
            let traced_match = (0..dims.len())
                .filter(|k| !kept.contains(k))
                .all(|k| ri[k] == ci[k]);
            if !traced_match {
                continue;
            }
            for (slot, &k) in kept.iter().enumerate() {
                rk[slot] = ri[k];
                ck[slot] = ci[k];
            }
            out[(join(&rk, &kept_dims), join(&ck, &kept_dims))] += z;
        }
    }
    Ok(out)
}

/// Reorder tensor factors: factor `order[k]` of the input becomes factor `k`
/// of the output.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() || order.iter().any(|&k| k >= dims.len() || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::DimMismatch(format!("{order:?} is not a permutation of {} factors", dims.len())));
    }
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut ri = vec![0; dims.len()];
    let mut ci = vec![0; dims.len()];
    let mut rn = vec![0; dims.len()];
    let mut cn = vec![0; dims.len()];
    for i in 0..n {
        split(i, dims, &mut ri);
        for (slot, &k) in order.iter().enumerate() {
            rn[slot] = ri[k];
        }
        let ni = join(&rn, &new_dims);
        for j in 0..n {
            split(j, dims, &mut ci);
            for (slot, &k) in order.iter().enumerate() {
                cn[slot] = ci[k];
            }
            out[(ni, join(&cn, &new_dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{C64, ONE};
    use crate::numerics::pauli;

    fn ket0() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]])
    }

    fn ket1() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0.0, 0.0], [0.0, 1.0]])
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_trace_multiplies() {
        let a = ComplexMatrix::from_rows(&[[C64::new(1.0, 2.0), ONE], [ZERO, C64::new(3.0, 0.0)]]);
        let b = pauli::z().scale_real(2.0);
        let k = kron(&a, &b);
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn product_state_is_pt_invariant() {
        let rho = kron(&ket0(), &ket1());
        for s in 0..2 {
            assert_eq!(partial_transpose(&rho, &[2, 2], s).unwrap(), rho);
        }
    }

    #[test]
    fn partial_trace_of_product_keeps_factor() {
        let m = kron(&pauli::x(), &ket0());
        let r = partial_trace(&m, &[2, 2], &[0]).unwrap();
        assert!(r.max_abs_diff(&pauli::x()) < 1e-15);
        let r1 = partial_trace(&m, &[2, 2], &[1]).unwrap();
        assert!(r1.max_abs_diff(&ComplexMatrix::zeros(2, 2)) < 1e-15);
    }

    #[test]
    fn dim_mismatch_is_reported() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(partial_transpose(&m, &[2, 3], 0), Err(Error::DimMismatch(_))));
        assert!(matches!(partial_transpose(&m, &[2, 2], 2), Err(Error::DimMismatch(_))));
        assert!(matches!(partial_trace(&m, &[4, 2], &[0]), Err(Error::DimMismatch(_))));
        assert!(matches!(permute_subsystems(&m, &[2, 2], &[0, 0]), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn permute_subsystems_swaps_kron_order() {
        let a = pauli::x();
        let b = pauli::y();
        let ab = kron(&a, &b);
        let ba = permute_subsystems(&ab, &[2, 2], &[1, 0]).unwrap();
        assert!(ba.max_abs_diff(&kron(&b, &a)) < 1e-15);
    }
}
