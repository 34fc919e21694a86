//! Bipartite two-outcome Bell expressions.
//!
//! An expression is stored as one `(m_A + 1) × (m_B + 1)` coefficient matrix.
//! Row and column `0` stand for the identity observable, so they carry the
//! marginal terms and entry `(0, 0)` is a constant offset.

mod classical;
mod format;
mod operators;
mod value;

pub use classical::{classical_bound, CLASSICAL_SETTINGS_LIMIT};
pub use format::{parse_bell_expression, serialize_bell_expression};
pub use operators::{Projector, StateVector, HERMITIAN_TOL, IDEMPOTENT_TOL, NORM_TOL};
pub use value::{evaluate_quantum_value, evaluate_quantum_value_complex, term_matrix};

pub(crate) use operators::max_abs;

use nalgebra::DMatrix;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// Coefficients `M_{μν}` of a Bell functional over {0,1}-valued observables.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    coeffs: DMatrix<f64>,
}

impl BellExpression {
    /// Builds an expression from its full coefficient matrix, marginals included.
    pub fn new(coeffs: DMatrix<f64>) -> Result<Self> {
        if coeffs.nrows() < 2 || coeffs.ncols() < 2 {
            return Err(Error::InvalidArgument(format!(
                "coefficient matrix must be at least 2x2, got {}x{}",
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        if let Some((idx, _)) = coeffs.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            let rows = coeffs.nrows();
            return Err(Error::NonFinite { row: idx % rows, col: idx / rows });
        }
        Ok(Self { coeffs })
    }

    /// All-zero expression with `m_a` and `m_b` settings.
    pub fn zeros(m_a: usize, m_b: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(m_a + 1, m_b + 1))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::dim("ragged coefficient rows"));
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn m_a(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    pub fn m_b(&self) -> usize {
        self.coeffs.ncols() - 1
    }

    pub fn coeff(&self, mu: usize, nu: usize) -> f64 {
        self.coeffs[(mu, nu)]
    }

    pub fn set_coeff(&mut self, mu: usize, nu: usize, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite { row: mu, col: nu });
        }
        self.coeffs[(mu, nu)] = value;
        Ok(())
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    /// Swaps the roles of Alice and Bob.
    pub fn swapped(&self) -> Self {
        Self { coeffs: self.coeffs.transpose() }
    }

    /// Relabels settings: row `μ ≥ 1` of the result is row `perm_a[μ-1] + 1`
    /// of `self`, likewise for columns.
    pub fn permuted(&self, perm_a: &[usize], perm_b: &[usize]) -> Result<Self> {
        if perm_a.len() != self.m_a() || perm_b.len() != self.m_b() {
            return Err(Error::dim("permutation length does not match settings"));
        }
        let row = |mu: usize| if mu == 0 { 0 } else { perm_a[mu - 1] + 1 };
        let col = |nu: usize| if nu == 0 { 0 } else { perm_b[nu - 1] + 1 };
        Ok(Self {
            coeffs: DMatrix::from_fn(self.coeffs.nrows(), self.coeffs.ncols(), |i, j| {
                self.coeffs[(row(i), col(j))]
            }),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0.0)
    }
}

impl Add for &BellExpression {
    type Output = Result<BellExpression>;

    fn add(self, rhs: &BellExpression) -> Result<BellExpression> {
        if self.coeffs.shape() != rhs.coeffs.shape() {
            return Err(Error::dim("expressions have different setting counts"));
        }
        BellExpression::new(&self.coeffs + &rhs.coeffs)
    }
}

impl Mul<&BellExpression> for f64 {
    type Output = BellExpression;

    fn mul(self, rhs: &BellExpression) -> BellExpression {
        BellExpression { coeffs: &rhs.coeffs * self }
    }
}

/// `⟨A1B1⟩ + ⟨A1B2⟩ + ⟨A2B1⟩ − ⟨A2B2⟩ − ⟨A1⟩ − ⟨B1⟩ ≤ 0`.
pub fn builtin_chsh() -> BellExpression {
    BellExpression::from_rows(&[
        &[0.0, -1.0, 0.0],
        &[-1.0, 1.0, 1.0],
        &[0.0, 1.0, -1.0],
    ])
    .expect("static coefficients")
}

/// The three-setting inequality `I3322 ≤ 0`:
/// `−⟨A2⟩ − ⟨B1⟩ − 2⟨B2⟩ + ⟨A1B1⟩ + ⟨A1B2⟩ + ⟨A2B1⟩ + ⟨A2B2⟩
///  − ⟨A1B3⟩ + ⟨A2B3⟩ − ⟨A3B1⟩ + ⟨A3B2⟩`.
pub fn builtin_i3322() -> BellExpression {
    BellExpression::from_rows(&[
        &[0.0, -1.0, -2.0, 0.0],
        &[0.0, 1.0, 1.0, -1.0],
        &[-1.0, 1.0, 1.0, 1.0],
        &[0.0, -1.0, 1.0, 0.0],
    ])
    .expect("static coefficients")
}

/// Quantum maximum of CHSH in {0,1} form, `1/√2 − 1/2`.
pub const CHSH_QUANTUM_MAX: f64 = 0.207_106_781_186_547_5;
/// Best I3322 value reachable with a pair of qubits.
pub const I3322_QUBIT_MAX: f64 = 0.25;
/// Reference upper bound for I3322 from the semidefinite hierarchy at level four.
pub const I3322_UPPER_BOUND: f64 = 0.250_875_385;
/// Limit value of the I3322 chain construction as the dimension grows.
pub const I3322_CHAIN_LIMIT: f64 = 0.250_875_384_514;
