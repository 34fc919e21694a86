#![allow(dead_code)]

use bellsaw::bell::{BellExpression, Projector, StateVector};
use bellsaw::eigen::{symmetrize, SeededRng};
use bellsaw::Scalar;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub fn max_abs<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.modulus()).fold(0.0, f64::max)
}

/// `⟨ψ|Σ M_{μν} A_μ ⊗ B_ν|ψ⟩` built from explicit Kronecker products.
pub fn kron_value<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Complex64 {
    let n = state.dim();
    let mut psi = DVector::<T>::zeros(n * n);
    for i in 0..n {
        psi[i * n + i] = state.coeffs()[i];
    }
    let id = DMatrix::<T>::identity(n, n);
    let a: Vec<DMatrix<T>> = std::iter::once(id.clone())
        .chain(alice.iter().map(|p| p.matrix().clone()))
        .collect();
    let b: Vec<DMatrix<T>> = std::iter::once(id)
        .chain(bob.iter().map(|p| p.matrix().clone()))
        .collect();
    let mut op = DMatrix::<T>::zeros(n * n, n * n);
    for (mu, am) in a.iter().enumerate() {
        for (nu, bm) in b.iter().enumerate() {
            op += am.kronecker(bm) * T::from_real(expr.coeff(mu, nu));
        }
    }
    let (re, im) = (psi.adjoint() * op * psi)[(0, 0)].parts();
    Complex64::new(re, im)
}

pub fn random_expression(m_a: usize, m_b: usize, rng: &mut SeededRng) -> BellExpression {
    BellExpression::new(DMatrix::from_fn(m_a + 1, m_b + 1, |_, _| rng.gen_range(-1.0..1.0))).unwrap()
}

pub fn random_hermitian<T: Scalar>(n: usize, rng: &mut SeededRng) -> DMatrix<T> {
    let m = DMatrix::<T>::from_fn(n, n, |_, _| {
        T::from_real(rng.gen_range(-1.0..1.0)) * T::random_phase(rng)
    });
    symmetrize(&m)
}

/// Objective of a single `c_i` update at fixed neighbours and state.
pub fn c_objective(c: f64, tau: f64, p: f64) -> f64 {
    c * tau + 2.0 * (1.0 - c * c).max(0.0).sqrt() * p
}

/// Maximizer of [`c_objective`] over `points` equally spaced values in `[−1, 1]`.
pub fn grid_argmax(tau: f64, p: f64, points: usize) -> f64 {
    let step = 2.0 / (points - 1) as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..points {
        let c = (-1.0 + k as f64 * step).min(1.0);
        let f = c_objective(c, tau, p);
        if f > best.0 {
            best = (f, c);
        }
    }
    best.1
}

pub fn tau(i: usize, c: &[f64], lambda: &[f64]) -> f64 {
    let (li, lj) = (lambda[i - 1], lambda[i]);
    (1.0 + 2.0 * c[i + 1]) * lj * lj - (1.0 - 2.0 * c[i - 1]) * li * li
}
