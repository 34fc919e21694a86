use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BellExpression, Projector, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_shapes<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<()> {
    if alice.len() != expr.m_a() || bob.len() != expr.m_b() {
        return Err(Error::dim(format!(
            "expression has {}x{} settings, got {} Alice and {} Bob operators",
            expr.m_a(),
            expr.m_b(),
            alice.len(),
            bob.len()
        )));
    }
    let n = state.dim();
    if let Some(p) = alice.iter().chain(bob).find(|p| p.dim() != n) {
        return Err(Error::dim(format!(
            "operator of dimension {} with a state of dimension {n}",
            p.dim()
        )));
    }
    Ok(())
}

/// Entrywise product `W_ij = conj(λ_i) λ_j X_ij`.
pub(crate) fn weighted<T: Scalar>(m: &DMatrix<T>, state: &StateVector<T>) -> DMatrix<T> {
    let l = state.coeffs();
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| l[i].conjugate() * l[j] * m[(i, j)])
}

/// `Σ_ij X_ij Y_ij` (no conjugation).
pub(crate) fn entrywise_dot<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>) -> T {
    x.iter().zip(y.iter()).fold(T::zero(), |acc, (a, b)| acc + *a * *b)
}

/// Correlator table `⟨ψ|A_μ ⊗ B_ν|ψ⟩` for `μ = 0..m_A`, `ν = 0..m_B`, with
/// index `0` the identity and `|ψ⟩ = Σ_i λ_i |i⟩|i⟩`.
pub fn term_matrix<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<DMatrix<Complex64>> {
    check_shapes(expr, alice, bob, state)?;
    let n = state.dim();
    let identity = DMatrix::<T>::identity(n, n);
    let a_side: Vec<&DMatrix<T>> = std::iter::once(&identity)
        .chain(alice.iter().map(Projector::matrix))
        .collect();
    let b_side: Vec<DMatrix<T>> = std::iter::once(&identity)
        .chain(bob.iter().map(Projector::matrix))
        .map(|b| weighted(b, state))
        .collect();
    Ok(DMatrix::from_fn(a_side.len(), b_side.len(), |mu, nu| {
        let (re, im) = entrywise_dot(a_side[mu], &b_side[nu]).parts();
        Complex64::new(re, im)
    }))
}

/// Bell value before the imaginary part is dropped.
pub fn evaluate_quantum_value_complex<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<Complex64> {
    let terms = term_matrix(expr, alice, bob, state)?;
    Ok(terms
        .iter()
        .zip(expr.coeffs().iter())
        .map(|(t, m)| t * *m)
        .sum())
}

/// `Σ_{μν} M_{μν} ⟨ψ|A_μ ⊗ B_ν|ψ⟩` for the state `Σ_i λ_i |i⟩|i⟩`.
pub fn evaluate_quantum_value<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<f64> {
    Ok(evaluate_quantum_value_complex(expr, alice, bob, state)?.re)
}
