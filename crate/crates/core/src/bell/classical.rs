use super::BellExpression;
use crate::error::{Error, Result};

/// Largest `m_A + m_B` accepted by [`classical_bound`].
pub const CLASSICAL_SETTINGS_LIMIT: usize = 30;

/// Exact local maximum by enumerating every deterministic strategy.
///
/// With `a_0 = b_0 = 1` fixed, returns `max Σ M_{μν} a_μ b_ν` over
/// `a_μ, b_ν ∈ {0,1}`. The party with fewer settings is enumerated; the
/// other one answers with its best response, setting `b_ν = 1` exactly when
/// the accumulated column is positive.
pub fn classical_bound(expr: &BellExpression) -> Result<f64> {
    let (m_a, m_b) = (expr.m_a(), expr.m_b());
    if m_a + m_b > CLASSICAL_SETTINGS_LIMIT {
        return Err(Error::SizeLimit {
            settings: m_a + m_b,
            limit: CLASSICAL_SETTINGS_LIMIT,
        });
    }
    let m = if m_a <= m_b { expr.coeffs().clone() } else { expr.coeffs().transpose() };
    let (rows, cols) = (m.nrows() - 1, m.ncols() - 1);
    let mut best = f64::NEG_INFINITY;
    let mut column = vec![0.0; cols + 1];
    for bits in 0u64..(1u64 << rows) {
        for (nu, c) in column.iter_mut().enumerate() {
            *c = m[(0, nu)];
            for mu in 1..=rows {
                if bits >> (mu - 1) & 1 == 1 {
                    *c += m[(mu, nu)];
                }
            }
        }
        let v = column[0] + column[1..].iter().map(|&c| c.max(0.0)).sum::<f64>();
        best = best.max(v);
    }
    Ok(best)
}
