//! SLOCC normal forms of two-qubit states: separable, equivalent to a unique
//! ordered Bell-diagonal state, or in the non-filterable ρ_ND(b) class.

use crate::bell::{bell_basis_change, is_entangled_bd, ppt_min_eigenvalue, WeightVector};
use crate::choi::NDState;
use crate::convertibility::{can_convert_bd, Conversion, Decision, Obstruction};
use crate::error::{Error, Result};
use crate::numerics::eigen::hermitian_function;
use crate::numerics::matrix::{ComplexMatrix, C64, I, ONE};
use crate::numerics::{hermitian_eigensystem, hermitian_eigenvalues, kron, partial_trace, pauli, Tolerances};

/// Exponent multiplier on the filter (2ρ_marg)^{−ω/2}; ω > 1 over-relaxes.
pub const DEFAULT_RELAXATION: f64 = 1.4;
pub const MAX_FILTER_ITERATIONS: usize = 500;
/// Full-rank states are always filterable; they get this much longer.
const FULL_RANK_ITERATIONS: usize = 20_000;
const MARGINAL_FLOOR: f64 = 1e-9;
const RANK_CUTOFF: f64 = 1e-9;
const STRUCTURAL_MATCH: f64 = 1e-8;
const INFIMUM_SWEEPS: usize = 5_000;

/// Check ρ is a 4×4 density matrix.
pub fn validate_state(rho: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimMismatch(format!("expected 4x4, got {}x{}", rho.rows(), rho.cols())));
    }
    if rho.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("non-finite entry".into()));
    }
    rho.ensure_hermitian(tol.hermitian.max(1e-12))?;
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > tol.equality {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let min = hermitian_eigenvalues(rho)?[0];
    if min < -tol.psd_slack {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

fn marginals(rho: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (
        partial_trace(rho, &[2, 2], &[0]).expect("4x4 state").hermitian_part(),
        partial_trace(rho, &[2, 2], &[1]).expect("4x4 state").hermitian_part(),
    )
}

/// max |ρ_A − I/2|, |ρ_B − I/2| entrywise.
pub fn marginal_deviation(rho: &ComplexMatrix) -> f64 {
    let half = ComplexMatrix::identity(2).scale_real(0.5);
    let (a, b) = marginals(rho);
    a.max_abs_diff(&half).max(b.max_abs_diff(&half))
}

#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub state: ComplexMatrix,
    pub converged: bool,
    pub iterations: usize,
    pub marginal_deviation: f64,
}

/// Alternate local filters (2ρ_A)^{−ω/2}⊗I and I⊗(2ρ_B)^{−ω/2} with trace
/// renormalization until both marginals are I/2.
pub fn filter_iteration_with(rho: &ComplexMatrix, max_iterations: usize, relaxation: f64, tol: &Tolerances) -> Result<FilterOutcome> {
    validate_state(rho, tol)?;
    let id = ComplexMatrix::identity(2);
    let mut state = rho.hermitian_part();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let deviation = marginal_deviation(&state);
        if deviation < tol.marginal {
            return Ok(FilterOutcome { state, converged: true, iterations, marginal_deviation: deviation });
        }
        if iterations > max_iterations {
            return Ok(FilterOutcome { state, converged: false, iterations: max_iterations, marginal_deviation: deviation });
        }
        for side in 0..2 {
            let (a, b) = marginals(&state);
            let marg = if side == 0 { a } else { b };
            let es = hermitian_eigensystem(&marg)?;
            if es.min() < MARGINAL_FLOOR {
                return Ok(FilterOutcome { state, converged: false, iterations, marginal_deviation: deviation });
            }
            let f = es.reconstruct_with(|x| (2.0 * x).powf(-0.5 * relaxation));
            let full = if side == 0 { kron(&f, &id) } else { kron(&id, &f) };
            let next = state.conjugate_by(&full);
            let tr = next.trace().re;
            state = next.scale_real(1.0 / tr).hermitian_part();
        }
    }
}

pub fn filter_iteration(rho: &ComplexMatrix, tol: &Tolerances) -> Result<FilterOutcome> {
    filter_iteration_with(rho, MAX_FILTER_ITERATIONS, DEFAULT_RELAXATION, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalFormClass {
    Separable,
    /// Ordered, entangled weights of the SLOCC-equivalent Bell-diagonal state.
    BellDiagonal(WeightVector),
    /// Non-filterable class ρ_ND(b); `exact` is false when b was estimated.
    NonDiagonal { b: f64, exact: bool },
}

#[derive(Debug, Clone)]
pub struct NormalFormResult {
    pub class: NormalFormClass,
    pub iterations: usize,
    pub marginal_deviation: f64,
    pub ppt_min_eigenvalue: f64,
}

pub fn classify(rho: &ComplexMatrix, tol: &Tolerances) -> Result<NormalFormResult> {
    validate_state(rho, tol)?;
    let ppt = ppt_min_eigenvalue(rho)?;
    if ppt >= -tol.witness {
        return Ok(NormalFormResult {
            class: NormalFormClass::Separable,
            iterations: 0,
            marginal_deviation: marginal_deviation(rho),
            ppt_min_eigenvalue: ppt,
        });
    }
    let mut outcome = filter_iteration(rho, tol)?;
    let rank = hermitian_eigenvalues(rho)?.iter().filter(|&&e| e > RANK_CUTOFF).count();
    if !outcome.converged && rank == 4 {
        outcome = filter_iteration_with(rho, FULL_RANK_ITERATIONS, DEFAULT_RELAXATION, tol)?;
        if !outcome.converged {
            return Err(Error::InternalInconsistency(format!(
                "full-rank state did not filter (marginal deviation {:e})",
                outcome.marginal_deviation
            )));
        }
    }
    let class = if outcome.converged {
        let mut ev = hermitian_eigenvalues(&outcome.state)?;
        ev.reverse();
        let w = WeightVector::normalized([ev[0].max(0.0), ev[1].max(0.0), ev[2].max(0.0), ev[3].max(0.0)])?;
        if !is_entangled_bd(&w) {
            return Err(Error::InternalInconsistency(format!(
                "PPT-violating state filtered to separable weights {w:?}"
            )));
        }
        NormalFormClass::BellDiagonal(w)
    } else {
        let (b, exact) = nd_parameter(rho, tol)?;
        NormalFormClass::NonDiagonal { b, exact }
    };
    Ok(NormalFormResult {
        class,
        iterations: outcome.iterations,
        marginal_deviation: outcome.marginal_deviation,
        ppt_min_eigenvalue: ppt,
    })
}

/// Ordered weights of the Bell-diagonal state SLOCC-equivalent to ρ.
pub fn bd_equivalent(rho: &ComplexMatrix, tol: &Tolerances) -> Result<WeightVector> {
    bd_of_class(&classify(rho, tol)?.class)
}

pub fn bd_of_class(class: &NormalFormClass) -> Result<WeightVector> {
    match *class {
        NormalFormClass::Separable => Err(Error::SeparableInput),
        NormalFormClass::BellDiagonal(w) => Ok(w),
        NormalFormClass::NonDiagonal { b, .. } => {
            let (hi, lo) = ((1.0 + 2.0 * b) / 2.0, (1.0 - 2.0 * b) / 2.0);
            WeightVector::new([hi, lo, 0.0, 0.0])
        }
    }
}

/// Full two-qubit SLOCC convertibility.
pub fn can_convert_two_qubit(source: &ComplexMatrix, target: &ComplexMatrix, tol: &Tolerances) -> Result<Decision> {
    let t = classify(target, tol)?;
    if t.class == NormalFormClass::Separable {
        validate_state(source, tol)?;
        return Ok(Decision::Convertible(Conversion::SeparableTarget));
    }
    let s = classify(source, tol)?;
    if s.class == NormalFormClass::Separable {
        return Ok(Decision::NotConvertible(Obstruction::SeparableSource));
    }
    can_convert_bd(&bd_of_class(&s.class)?, &bd_of_class(&t.class)?, tol)
}

/// Wootters concurrence.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    let yy = kron(&pauli::y(), &pauli::y());
    let tilde = rho.conj().conjugate_by(&yy);
    let sqrt_rho = hermitian_function(&rho.hermitian_part(), |x| x.max(0.0).sqrt())?;
    let r = tilde.conjugate_by(&sqrt_rho).hermitian_part();
    let mut mu: Vec<f64> = hermitian_eigenvalues(&r)?.iter().map(|x| x.max(0.0).sqrt()).collect();
    mu.reverse();
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// b of the ρ_ND class: read off exactly when ρ is a local-unitary copy of
/// ρ_ND(b), otherwise estimated from the SLOCC supremum of the concurrence.
pub fn nd_parameter(rho: &ComplexMatrix, tol: &Tolerances) -> Result<(f64, bool)> {
    if let Some(b) = structural_nd_parameter(rho)? {
        return Ok((b, true));
    }
    let c = concurrence(rho)?;
    let inf = product_filter_infimum(rho, tol)?;
    Ok(((c / (2.0 * inf)).min(0.5), false))
}

fn unitary_sending_to_one(a: &[C64]) -> ComplexMatrix {
    // Rows ⟨a⊥| and ⟨a|, so U|a⟩ = |1⟩.
    let perp = [-a[1].conj(), a[0].conj()];
    ComplexMatrix::from_rows(&[[perp[0].conj(), perp[1].conj()], [a[0].conj(), a[1].conj()]])
}

/// Split a rank-one 2×2 coefficient matrix M = a bᵀ into unit vectors.
fn product_factors(m: &[C64; 4]) -> Option<(Vec<C64>, Vec<C64>)> {
    let norm2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 || (m[0] * m[3] - m[1] * m[2]).norm() > 1e-6 * norm2 {
        return None;
    }
    let (r0, r1) = (m[0].norm_sqr() + m[1].norm_sqr(), m[2].norm_sqr() + m[3].norm_sqr());
    let row = if r0 >= r1 { [m[0], m[1]] } else { [m[2], m[3]] };
    let (c0, c1) = (m[0].norm_sqr() + m[2].norm_sqr(), m[1].norm_sqr() + m[3].norm_sqr());
    let col = if c0 >= c1 { [m[0], m[2]] } else { [m[1], m[3]] };
    let unit = |v: [C64; 2]| {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        vec![v[0] / n, v[1] / n]
    };
    Some((unit(col), unit(row)))
}

/// Product vectors in the span of one or two kernel vectors.
fn product_kernel_vectors(kernel: &[Vec<C64>]) -> Vec<[C64; 4]> {
    let as_arr = |v: &Vec<C64>| [v[0], v[1], v[2], v[3]];
    match kernel.len() {
        1 => vec![as_arr(&kernel[0])],
        2 => {
            // det(M₁ + t M₂) = d₁ + t·x + t²·d₂
            let (p, q) = (as_arr(&kernel[0]), as_arr(&kernel[1]));
            let d1 = p[0] * p[3] - p[1] * p[2];
            let d2 = q[0] * q[3] - q[1] * q[2];
            let x = p[0] * q[3] + q[0] * p[3] - p[1] * q[2] - q[1] * p[2];
            let mix = |t: C64| std::array::from_fn(|k| p[k] + t * q[k]);
            let mut out = vec![q];
            if d2.norm() > 1e-12 {
                let disc = (x * x - 4.0 * d1 * d2).sqrt();
                out.push(mix((-x + disc) / (2.0 * d2)));
                out.push(mix((-x - disc) / (2.0 * d2)));
            } else if x.norm() > 1e-12 {
                out.push(mix(-d1 / x));
            }
            out
        }
        _ => Vec::new(),
    }
}

fn structural_nd_parameter(rho: &ComplexMatrix) -> Result<Option<f64>> {
    let es = hermitian_eigensystem(&rho.hermitian_part())?;
    let kernel: Vec<Vec<C64>> = (0..4).filter(|&k| es.values[k] <= RANK_CUTOFF).map(|k| es.vector(k)).collect();
    if !(1..=2).contains(&kernel.len()) {
        return Ok(None);
    }
    for v in product_kernel_vectors(&kernel) {
        let Some((a, b)) = product_factors(&v) else { continue };
        let u = kron(&unitary_sending_to_one(&a), &unitary_sending_to_one(&b));
        let moved = rho.conjugate_by(&u);
        let c = moved[(1, 2)];
        let phase = if c.norm() > 0.0 { (c / c.norm()).conj() } else { ONE };
        let mut fix = ComplexMatrix::identity(4);
        fix[(1, 1)] = phase;
        fix[(3, 3)] = phase;
        let aligned = moved.conjugate_by(&fix);
        let b = 2.0 * aligned[(1, 2)].re;
        if !(b > 0.0 && b <= 0.5 + STRUCTURAL_MATCH) {
            continue;
        }
        let b = b.min(0.5);
        if aligned.max_abs_diff(&NDState::new(b)?.density()) <= STRUCTURAL_MATCH {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// inf tr[(X⊗Y)ρ] over positive X, Y with det 1, by alternating exact
/// minimization (each step X = √det(σ)·σ⁻¹ for σ = tr_B[(I⊗Y)ρ]).
pub fn product_filter_infimum(rho: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    validate_state(rho, tol)?;
    let id = ComplexMatrix::identity(2);
    let mut y = id.clone();
    let mut value = 1.0;
    let det2 = |m: &ComplexMatrix| (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let inv2 = |m: &ComplexMatrix, d: f64| {
        ComplexMatrix::from_rows(&[[m[(1, 1)], -m[(0, 1)]], [-m[(1, 0)], m[(0, 0)]]]).scale_real(1.0 / d)
    };
    for _ in 0..INFIMUM_SWEEPS {
        let sy = partial_trace(&kron(&id, &y).matmul(rho), &[2, 2], &[0])?.hermitian_part();
        let d = det2(&sy);
        if d <= 0.0 {
            return Ok(0.0);
        }
        let x = inv2(&sy, d).scale_real(d.sqrt());
        let sx = partial_trace(&kron(&x, &id).matmul(rho), &[2, 2], &[1])?.hermitian_part();
        let d = det2(&sx);
        if d <= 0.0 {
            return Ok(0.0);
        }
        y = inv2(&sx, d).scale_real(d.sqrt());
        value = 2.0 * d.sqrt();
    }
    Ok(value)
}

/// SU(2) element U with U σ·v U† = σ·(R v) for a rotation R ∈ SO(3).
pub fn su2_from_rotation(r: &[[f64; 3]; 3]) -> ComplexMatrix {
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    let axis = &(&pauli::x().scale_real(x) + &pauli::y().scale_real(y)) + &pauli::z().scale_real(z);
    &ComplexMatrix::identity(2).scale_real(w) - &axis.scale(I)
}

/// Tᵢⱼ = tr[ρ σᵢ⊗σⱼ].
pub fn correlation_matrix(rho: &ComplexMatrix) -> [[f64; 3]; 3] {
    let s = [pauli::x(), pauli::y(), pauli::z()];
    std::array::from_fn(|i| std::array::from_fn(|j| rho.trace_product(&kron(&s[i], &s[j])).re))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// T = P·D·Qᵀ with P, Q ∈ SO(3) (D may carry signs). Columns stored as rows
/// of the returned arrays: `p[k]` is the k-th left singular vector.
fn signed_svd(t: &[[f64; 3]; 3]) -> Result<([[f64; 3]; 3], [[f64; 3]; 3])> {
    let tt = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((0..3).map(|k| t[k][i] * t[k][j]).sum(), 0.0));
    let es = hermitian_eigensystem(&tt)?;
    let mut q: [[f64; 3]; 3] = std::array::from_fn(|k| std::array::from_fn(|i| es.vectors[(i, 2 - k)].re));
    let sing: Vec<f64> = (0..3).map(|k| es.values[2 - k].max(0.0).sqrt()).collect();
    let scale = sing[0].max(1e-300);
    let mut p = [[0.0; 3]; 3];
    let mut filled = 0;
    for k in 0..3 {
        if sing[k] > 1e-9 * scale.max(1e-9) {
            let v: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| t[i][j] * q[k][j]).sum::<f64>() / sing[k]);
            p[k] = v;
            filled += 1;
        }
    }
    // Complete the left basis for vanishing singular values.
    match filled {
        3 => {}
        2 => p[2] = cross(p[0], p[1]),
        1 => {
            let e = if p[0][0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let c = cross(p[0], e);
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            p[1] = c.map(|x| x / n);
            p[2] = cross(p[0], p[1]);
        }
        _ => {
            p = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            q = p;
        }
    }
    if det3(&p) < 0.0 {
        p[2] = p[2].map(|x| -x);
    }
    if det3(&q) < 0.0 {
        q[2] = q[2].map(|x| -x);
    }
    Ok((p, q))
}

/// Local unitaries (U_A, U_B) bringing a state with maximally mixed
/// marginals to Bell-diagonal form, and the largest remaining Bell-basis
/// off-diagonal modulus.
pub fn diagonalizing_rotation(rho: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
    let t = correlation_matrix(rho);
    let (p, q) = signed_svd(&t)?;
    // Rows of p/q are the singular vectors, so as matrices they are Pᵀ, Qᵀ.
    let ua = su2_from_rotation(&p);
    let ub = su2_from_rotation(&q);
    let rotated = rho.conjugate_by(&kron(&ua, &ub));
    let u = bell_basis_change();
    let in_bell = u.adjoint().matmul(&rotated).matmul(&u);
    let mut off = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                off = off.max(in_bell[(i, j)].norm());
            }
        }
    }
    Ok((ua, ub, off))
}
