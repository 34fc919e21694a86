//! Spectral primitives: Hermitian eigendecomposition, positive-part
//! projectors, top eigenpairs and seeded random operators.

mod random;
mod tridiagonal;

pub use random::{random_projector, random_state, SeededRng, ROTATIONS_PER_ENTRY};
pub use tridiagonal::SymTridiagonal;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::bell::{max_abs, Projector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Scalar> {
    pub values: Vec<f64>,
    pub vectors: DMatrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// `V·diag(values)·V*`.
    pub fn reconstruct(&self) -> DMatrix<T> {
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, k| {
            self.vectors[(i, k)] * T::from_real(self.values[k])
        });
        scaled * self.vectors.adjoint()
    }
}

fn check_finite<T: Scalar>(h: &DMatrix<T>) -> Result<()> {
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            if !h[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `(H + H*)/2`.
pub fn symmetrize<T: Scalar>(h: &DMatrix<T>) -> DMatrix<T> {
    (h + h.adjoint()).unscale(2.0)
}

/// Full eigendecomposition of the Hermitian part of `h`.
pub fn eigh<T: Scalar>(h: &DMatrix<T>) -> Result<EigenDecomposition<T>> {
    if !h.is_square() {
        return Err(Error::dim(format!("eigh on a {}x{} matrix", h.nrows(), h.ncols())));
    }
    check_finite(h)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: DMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::new(symmetrize(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalue cutoff below which a direction counts as non-positive.
pub fn positive_cutoff<T: Scalar>(x: &DMatrix<T>) -> f64 {
    1e-12 * (1.0 + max_abs(x))
}

/// Projector onto the eigenvectors of `x` with eigenvalue above the cutoff.
///
/// Maximizes `tr(P·X)` over all projectors `P`. Zero eigenvalues are left
/// out, which picks the minimal-rank maximizer.
pub fn positive_spectral_projector<T: Scalar>(x: &DMatrix<T>) -> Result<Projector<T>> {
    let eig = eigh(x)?;
    let n = x.nrows();
    let cutoff = positive_cutoff(x);
    let mut p = DMatrix::<T>::zeros(n, n);
    for (k, &w) in eig.values.iter().enumerate() {
        if w > cutoff {
            let v = eig.vectors.column(k);
            p += &v * v.adjoint();
        }
    }
    Ok(Projector::from_matrix_unchecked(symmetrize(&p)))
}

/// Largest eigenvalue of the Hermitian part of `m` and a unit eigenvector.
pub fn largest_eigenpair<T: Scalar>(m: &DMatrix<T>) -> Result<(f64, DVector<T>)> {
    let eig = eigh(m)?;
    let n = m.nrows();
    if n == 0 {
        return Err(Error::dim("largest eigenpair of an empty matrix"));
    }
    let v = eig.vectors.column(n - 1).into_owned();
    let norm = v.norm();
    Ok((eig.values[n - 1], v.unscale(norm)))
}
