use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

const MAX_BISECTIONS: usize = 256;
const MAX_INVERSE_STEPS: usize = 8;

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::dim(format!(
                "tridiagonal with {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if let Some(i) = diag.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: i });
        }
        if let Some(i) = off.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: i, col: i + 1 });
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for (i, &b) in self.off.iter().enumerate() {
            m[(i, i + 1)] = b;
            m[(i + 1, i)] = b;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn pivot_floor(&self) -> f64 {
        let m = self.off.iter().fold(f64::MIN_POSITIVE, |a, b| a.max(b * b));
        m * f64::EPSILON * f64::EPSILON
    }

    /// Pivots of the `LDLᵀ` factorization of `T − xI`, with zero pivots
    /// nudged to `-floor`.
    fn pivots(&self, x: f64, floor: f64, out: &mut Vec<f64>) {
        out.clear();
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q.abs() < floor {
                q = -floor;
            }
            out.push(q);
        }
    }

    /// Sturm count: number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut buf = Vec::with_capacity(self.dim());
        self.pivots(x, self.pivot_floor(), &mut buf);
        buf.iter().filter(|&&q| q < 0.0).count()
    }

    /// Largest eigenvalue and a unit eigenvector, by Sturm bisection followed
    /// by inverse iteration shifted just above the spectrum.
    ///
    /// With nonnegative off-diagonals the returned vector is entrywise
    /// nonnegative.
    pub fn largest_eigenpair(&self) -> (f64, Vec<f64>) {
        let n = self.dim();
        if n == 1 {
            return (self.diag[0], vec![1.0]);
        }
        let floor = self.pivot_floor();
        let mut pivots = Vec::with_capacity(n);
        let negatives = |x: f64, buf: &mut Vec<f64>| {
            self.pivots(x, floor, buf);
            buf.iter().filter(|&&q| q < 0.0).count()
        };

        let (glo, ghi) = self.gershgorin();
        let scale = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
        let mut lo = glo - f64::EPSILON * scale;
        let mut hi = ghi + 2.0 * f64::EPSILON * scale;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if negatives(mid, &mut pivots) == n {
                hi = mid;
            } else {
                lo = mid;
            }
        }

        // Every eigenvalue lies below `hi`, so `hi·I − T` is positive definite.
        negatives(hi, &mut pivots);
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0; n];
        for _ in 0..MAX_INVERSE_STEPS {
            self.solve_shifted(&pivots, &x, &mut y);
            // The shifted matrix is negative definite; flip to keep the sign.
            let norm = -y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let delta = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b / norm).abs())
                .fold(0.0, f64::max);
            for (a, b) in x.iter_mut().zip(&y) {
                *a = b / norm;
            }
            if delta < 4.0 * f64::EPSILON {
                break;
            }
        }
        let tx = self.mul_vec(&x);
        let rayleigh = x.iter().zip(&tx).map(|(a, b)| a * b).sum::<f64>();
        (rayleigh, x)
    }

    /// Solves `(T − σI) y = x` given the pivots for that shift.
    fn solve_shifted(&self, pivots: &[f64], x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        // Forward: L z = x with L unit lower bidiagonal, l_i = off_{i-1}/q_{i-1}.
        y[0] = x[0];
        for i in 1..n {
            y[i] = x[i] - self.off[i - 1] / pivots[i - 1] * y[i - 1];
        }
        for i in 0..n {
            y[i] /= pivots[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= self.off[i] / pivots[i] * y[i + 1];
        }
    }
}
