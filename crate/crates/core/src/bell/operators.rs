use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Max-norm tolerance for Hermiticity of a projector.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max-norm tolerance for `P·P = P`.
pub const IDEMPOTENT_TOL: f64 = 1e-10;
/// Tolerance for the unit norm of a state.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn max_abs<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.modulus()))
}

/// A Hermitian idempotent matrix standing for one {0,1}-valued measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T: Scalar> {
    matrix: DMatrix<T>,
}

impl<T: Scalar> Projector<T> {
    /// Validates Hermiticity and idempotency before wrapping `matrix`.
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotProjector(format!(
                "matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::NotProjector(format!("hermiticity defect {herm:e}")));
        }
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        if idem > IDEMPOTENT_TOL {
            return Err(Error::NotProjector(format!("idempotency defect {idem:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller has constructed as a projector.
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n, n) }
    }

    /// Diagonal projector with ones where `bits` is true.
    pub fn diagonal(bits: &[bool]) -> Self {
        let n = bits.len();
        let mut matrix = DMatrix::zeros(n, n);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                matrix[(i, i)] = T::one();
            }
        }
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().real()
    }

    /// `(hermiticity defect, idempotency defect)` in max-norm.
    pub fn defects(&self) -> (f64, f64) {
        let m = &self.matrix;
        (max_abs(&(m - m.adjoint())), max_abs(&(m * m - m)))
    }

    pub fn is_valid(&self) -> bool {
        let (h, i) = self.defects();
        h <= HERMITIAN_TOL && i <= IDEMPOTENT_TOL
    }
}

/// Coefficients of the shared pure state `Σ λ_i |i⟩|i⟩`.
///
/// Mid-iteration the entries may carry signs or phases; [`StateVector::canonical`]
/// turns them into Schmidt coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    coeffs: DVector<T>,
}

impl<T: Scalar> StateVector<T> {
    /// Normalizes `coeffs` to unit Euclidean norm.
    pub fn new(coeffs: DVector<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty state".into()));
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite state entry".into()));
        }
        let norm = coeffs.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero state".into()));
        }
        Ok(Self { coeffs: coeffs.unscale(norm) })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            coeffs.len(),
            coeffs.iter().map(|&x| T::from_real(x)),
        ))
    }

    pub(crate) fn from_unit_unchecked(coeffs: DVector<T>) -> Self {
        Self { coeffs }
    }

    /// The maximally entangled state `(1, ..., 1)/√n`.
    pub fn maximally_entangled(n: usize) -> Self {
        let v = T::from_real(1.0 / (n as f64).sqrt());
        Self { coeffs: DVector::from_element(n, v) }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &DVector<T> {
        &self.coeffs
    }

    pub fn abs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|x| x.modulus()).collect()
    }

    pub fn norm_defect(&self) -> f64 {
        (self.coeffs.norm() - 1.0).abs()
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs
            .iter()
            .all(|x| x.imaginary() == 0.0 && x.clone().real() >= 0.0)
    }

    /// Moves the phases of the coefficients into Alice's basis.
    ///
    /// Returns the Schmidt-form state together with the rotated Alice
    /// operators; the Bell value is unchanged.
    pub fn canonical(&self, alice: &[Projector<T>]) -> (Self, Vec<Projector<T>>) {
        let n = self.dim();
        let phases: Vec<T> = self
            .coeffs
            .iter()
            .map(|x| {
                let m = x.modulus();
                if m == 0.0 {
                    T::one()
                } else {
                    x.unscale(m)
                }
            })
            .collect();
        let coeffs = DVector::from_iterator(n, self.coeffs.iter().map(|x| T::from_real(x.modulus())));
        let rotated = alice
            .iter()
            .map(|a| {
                let mut m = a.matrix().clone();
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = phases[i].conjugate() * m[(i, j)] * phases[j];
                    }
                }
                Projector::from_matrix_unchecked(m)
            })
            .collect();
        (Self { coeffs }, rotated)
    }
}
