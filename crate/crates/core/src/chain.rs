//! Block-diagonal I3322 operator family parametrized by a chain of cosines.
//!
//! The six projectors are built from `2×2` blocks
//! `[(1∓c_i)/2, ±s_i/2; ±s_i/2, (1±c_i)/2]` with `s_i = √(1 − c_i²)`, where
//! the block carrying `c_i` sits on rows `(i, i+1)`: even `i` on Alice's
//! side, odd `i` on Bob's. With `c_0 = 1` and the branch value `c_n ∈ {0, −1}`
//! the state problem reduces to the top eigenvector of a symmetric
//! tridiagonal matrix, and each `c_i` has a closed-form optimum given its
//! neighbours and the state. Alternating the two gives solutions for
//! dimensions in the thousands.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::bell::{builtin_i3322, evaluate_quantum_value, Projector, StateVector, I3322_UPPER_BOUND};
use crate::eigen::{positive_spectral_projector, SymTridiagonal};
use crate::error::{Error, Result};
use crate::seesaw::{build_x, build_y, step_state};

/// Initial plateau magnitude of the `c_i` profile.
pub const INIT_PLATEAU: f64 = 0.9;
pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_CYCLES: usize = 50_000;

/// Last chain parameter `c_n`, which fixes the final diagonal element of the
/// `B_2` matrix (odd `n`) or of `A_1` (even `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    /// `c_n = 0`: the family that wins at low dimension.
    Zero,
    /// `c_n = −1`: the family that converges to the limit value.
    MinusOne,
}

impl Branch {
    pub fn value(self) -> f64 {
        match self {
            Branch::Zero => 0.0,
            Branch::MinusOne => -1.0,
        }
    }

    pub const BOTH: [Branch; 2] = [Branch::Zero, Branch::MinusOne];
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Zero => f.pad("0"),
            Branch::MinusOne => f.pad("-1"),
        }
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" => Ok(Branch::Zero),
            "-1" => Ok(Branch::MinusOne),
            other => Err(format!("unknown branch '{other}', expected 0 or -1")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Chain parameters `c_0..c_n` plus the state `λ_1..λ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    pub n: usize,
    pub branch: Branch,
    /// `c[0] = 1`, `c[n]` is the branch value.
    pub c: Vec<f64>,
    pub lambda: Vec<f64>,
}

fn sine(c: f64) -> f64 {
    (1.0 - c * c).max(0.0).sqrt()
}

impl ChainParams {
    /// Validates bounds, endpoints and lengths.
    pub fn new(n: usize, branch: Branch, c: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("chain needs n >= 2, got {n}")));
        }
        if c.len() != n + 1 || lambda.len() != n {
            return Err(Error::dim(format!(
                "chain of dimension {n} needs {} parameters and {n} state entries, got {} and {}",
                n + 1,
                c.len(),
                lambda.len()
            )));
        }
        if c[0] != 1.0 || c[n] != branch.value() {
            return Err(Error::InvalidArgument(format!(
                "endpoints must be c_0 = 1 and c_n = {}, got {} and {}",
                branch.value(),
                c[0],
                c[n]
            )));
        }
        if let Some(i) = c.iter().position(|x| !(-1.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument(format!("c_{i} = {} outside [-1, 1]", c[i])));
        }
        Ok(Self { n, branch, c, lambda })
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    pub fn s(&self, i: usize) -> f64 {
        sine(self.c[i])
    }

    pub fn state(&self) -> Result<StateVector<f64>> {
        StateVector::from_real(&self.lambda)
    }

    /// Starting profile: `+C` below `split`, `−C` above it (on the `−1`
    /// branch), `0` exactly at it; constant `+C` on the `0` branch.
    pub fn initial_profile(n: usize, branch: Branch, split: Option<f64>) -> Vec<f64> {
        let split = split.unwrap_or(n as f64 / 2.0);
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        c[n] = branch.value();
        for (i, ci) in c.iter_mut().enumerate().take(n).skip(1) {
            *ci = match branch {
                Branch::Zero => INIT_PLATEAU,
                Branch::MinusOne => {
                    let x = i as f64;
                    if x < split {
                        INIT_PLATEAU
                    } else if x > split {
                        -INIT_PLATEAU
                    } else {
                        0.0
                    }
                }
            };
        }
        c
    }

    /// Index `i` with `c_i > 0 ≥ c_{i+1}` among `c_1..c_{n−1}`.
    pub fn sign_change_index(&self) -> Option<usize> {
        (1..self.n - 1).find(|&i| self.c[i] > 0.0 && self.c[i + 1] <= 0.0)
    }
}

fn block(m: &mut DMatrix<f64>, i: usize, entries: [f64; 4]) {
    // Block carrying c_i occupies 1-based rows (i, i+1).
    let r = i - 1;
    m[(r, r)] = entries[0];
    m[(r, r + 1)] = entries[1];
    m[(r + 1, r)] = entries[2];
    m[(r + 1, r + 1)] = entries[3];
}

/// The six projectors `(A_1, A_2, A_3)`, `(B_1, B_2, B_3)` of the family.
pub fn build_operators(params: &ChainParams) -> Result<(Vec<Projector<f64>>, Vec<Projector<f64>>)> {
    let ChainParams { n, c, .. } = params;
    let n = *n;
    if c.len() != n + 1 {
        return Err(Error::dim("parameter count does not match dimension"));
    }
    if let Some(i) = c.iter().position(|x| !(-1.0..=1.0).contains(x)) {
        return Err(Error::InvalidArgument(format!("c_{i} = {} outside [-1, 1]", c[i])));
    }
    let zero = || DMatrix::<f64>::zeros(n, n);
    let (mut a1, mut a2, mut a3) = (zero(), zero(), zero());
    let (mut b1, mut b2, mut b3) = (zero(), zero(), zero());
    let last = n - 1;

    for i in 1..n {
        let (ci, si) = (c[i], sine(c[i]));
        if i % 2 == 0 {
            block(&mut a2, i, [(1.0 - ci) / 2.0, si / 2.0, si / 2.0, (1.0 + ci) / 2.0]);
            block(&mut a1, i, [(1.0 - ci) / 2.0, -si / 2.0, -si / 2.0, (1.0 + ci) / 2.0]);
            block(&mut b3, i, [0.5; 4]);
        } else {
            block(&mut b2, i, [(1.0 + ci) / 2.0, si / 2.0, si / 2.0, (1.0 - ci) / 2.0]);
            block(&mut b1, i, [(1.0 + ci) / 2.0, -si / 2.0, -si / 2.0, (1.0 - ci) / 2.0]);
            block(&mut a3, i, [0.5; 4]);
        }
    }
    a1[(0, 0)] = 1.0;
    a2[(0, 0)] = 1.0;
    b3[(0, 0)] = 1.0;
    match params.parity() {
        Parity::Odd => {
            b2[(last, last)] = 1.0 + c[n];
            b1[(last, last)] = 0.0;
            a3[(last, last)] = 1.0;
        }
        Parity::Even => {
            a2[(last, last)] = 1.0;
            a1[(last, last)] = -c[n];
            b3[(last, last)] = 1.0;
        }
    }
    let wrap = |m: DMatrix<f64>| Projector::new(m);
    Ok((
        vec![wrap(a1)?, wrap(a2)?, wrap(a3)?],
        vec![wrap(b1)?, wrap(b2)?, wrap(b3)?],
    ))
}

/// Optimal `c_i` for fixed neighbours `c_{i±1}` and state: maximizes
/// `c·τ_i + 2√(1−c²)·λ_iλ_{i+1}` with
/// `τ_i = (1 + 2c_{i+1})λ_{i+1}² − (1 − 2c_{i−1})λ_i²`.
///
/// `lambda` is indexed from zero (`lambda[i-1]` is `λ_i`).
pub fn update_c(i: usize, c: &[f64], lambda: &[f64]) -> f64 {
    let (li, lj) = (lambda[i - 1], lambda[i]);
    let tau = (1.0 + 2.0 * c[i + 1]) * lj * lj - (1.0 - 2.0 * c[i - 1]) * li * li;
    let p = li * lj;
    if p < 0.0 {
        // Objective is convex in c: the optimum sits at an endpoint.
        return if tau >= 0.0 { 1.0 } else { -1.0 };
    }
    let denom = (tau * tau + 4.0 * p * p).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        (tau / denom).clamp(-1.0, 1.0)
    }
}

/// Tridiagonal state matrix:
/// `M_ii = c_{i−1}c_i + (c_{i−1} − c_i)/2 − 1 + (c_n + 1)/2·δ_in`,
/// `M_{i,i+1} = s_i/2`.
pub fn build_tridiagonal(c: &[f64], n: usize) -> Result<SymTridiagonal> {
    if n < 1 || c.len() != n + 1 {
        return Err(Error::dim(format!("need {} parameters for n = {n}, got {}", n + 1, c.len())));
    }
    let mut diag: Vec<f64> = (1..=n)
        .map(|i| c[i - 1] * c[i] + (c[i - 1] - c[i]) / 2.0 - 1.0)
        .collect();
    diag[n - 1] += (c[n] + 1.0) / 2.0;
    let off = (1..n).map(|i| sine(c[i]) / 2.0).collect();
    SymTridiagonal::new(diag, off)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOptions {
    /// Full starting profile `c_0..c_n`; overrides `split`.
    pub init: Option<Vec<f64>>,
    /// Position of the initial sign change on the `−1` branch.
    pub split: Option<f64>,
    /// Indices whose `c_i` stays at its initial value.
    pub pinned: Vec<usize>,
    pub tol: f64,
    pub max_cycles: usize,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            init: None,
            split: None,
            pinned: Vec::new(),
            tol: DEFAULT_TOL,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }
}

impl ChainOptions {
    /// Holds `c_{n/2} = 0`, forcing the sign change onto an integer site.
    pub fn pinned_middle(n: usize) -> Self {
        Self {
            split: Some((n / 2) as f64),
            pinned: vec![n / 2],
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    pub value: f64,
    pub params: ChainParams,
    pub iterations: usize,
    pub converged: bool,
    pub sign_change_index: Option<usize>,
    /// Top eigenvalue after every cycle.
    pub history: Vec<f64>,
}

impl ChainResult {
    pub fn distance(&self) -> f64 {
        I3322_UPPER_BOUND - self.value
    }
}

/// Cycles over which the contraction rate is averaged.
const RATE_WINDOW: usize = 10;

/// Geometric estimate of the gain still to come. Convergence is linear, so
/// the last per-cycle gain understates the distance to the fixed point by
/// `1/(1 − rate)`; the rate is averaged over the last few cycles.
fn remaining_gain(history: &[f64]) -> Option<f64> {
    let k = history.len();
    if k < 2 {
        return None;
    }
    let d = history[k - 1] - history[k - 2];
    if d <= f64::EPSILON * history[k - 1].abs() {
        return Some(0.0);
    }
    if k < RATE_WINDOW + 2 {
        return None;
    }
    let earlier = history[k - 1 - RATE_WINDOW] - history[k - 2 - RATE_WINDOW];
    if earlier <= 0.0 {
        return None;
    }
    let rate = (d / earlier).powf(1.0 / RATE_WINDOW as f64);
    (rate < 1.0).then(|| d * rate / (1.0 - rate))
}

/// Alternates the state step (top eigenvector of the tridiagonal matrix)
/// with an in-place sweep of the `c_i` updates for `i = 1..n−1`.
pub fn run_chain(n: usize, branch: Branch, options: &ChainOptions) -> Result<ChainResult> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("chain needs n >= 2, got {n}")));
    }
    if !(options.tol > 0.0) || options.max_cycles == 0 {
        return Err(Error::InvalidArgument("tolerance and cycle budget must be positive".into()));
    }
    let mut c = match &options.init {
        Some(init) => init.clone(),
        None => ChainParams::initial_profile(n, branch, options.split),
    };
    // Validates the starting profile.
    ChainParams::new(n, branch, c.clone(), vec![0.0; n])?;
    if let Some(&i) = options.pinned.iter().find(|&&i| i == 0 || i >= n) {
        return Err(Error::InvalidArgument(format!("cannot pin c_{i}")));
    }
    let mut free = vec![true; n + 1];
    for &i in &options.pinned {
        free[i] = false;
    }

    let mut history = Vec::new();
    let mut lambda;
    let mut converged = false;
    loop {
        let (value, mut v) = build_tridiagonal(&c, n)?.largest_eigenpair();
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        lambda = v;
        history.push(value);
        if remaining_gain(&history).is_some_and(|gain| gain < options.tol) {
            converged = true;
            break;
        }
        if history.len() >= options.max_cycles {
            break;
        }
        for i in 1..n {
            if free[i] {
                c[i] = update_c(i, &c, &lambda);
            }
        }
    }
    let params = ChainParams::new(n, branch, c, lambda)?;
    Ok(ChainResult {
        value: *history.last().expect("one cycle"),
        sign_change_index: params.sign_change_index(),
        params,
        iterations: history.len(),
        converged,
        history,
    })
}

/// One row of a dimension sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub branch: Branch,
    pub value: f64,
    pub distance: f64,
    pub iterations: usize,
    pub converged: bool,
    pub sign_change_index: Option<usize>,
}

impl From<&ChainResult> for SweepRow {
    fn from(r: &ChainResult) -> Self {
        Self {
            n: r.params.n,
            branch: r.params.branch,
            value: r.value,
            distance: r.distance(),
            iterations: r.iterations,
            converged: r.converged,
            sign_change_index: r.sign_change_index,
        }
    }
}

/// Runs every `(n, branch)` cell; results come back ordered by `n`, then
/// branch.
pub fn sweep_results(
    dims: &[usize],
    branches: &[Branch],
    options: &ChainOptions,
    jobs: usize,
) -> Result<Vec<ChainResult>> {
    use rayon::prelude::*;
    if dims.is_empty() || branches.is_empty() {
        return Err(Error::InvalidArgument("empty sweep".into()));
    }
    let mut cells: Vec<(usize, Branch)> = dims
        .iter()
        .flat_map(|&n| branches.iter().map(move |&b| (n, b)))
        .collect();
    cells.sort();
    cells.dedup();
    let run = |&(n, b): &(usize, Branch)| run_chain(n, b, options);
    let results: Vec<Result<ChainResult>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(run).collect())
    } else {
        cells.iter().map(run).collect()
    };
    results.into_iter().collect()
}

/// Summary rows of [`sweep_results`].
pub fn sweep(
    dims: &[usize],
    branches: &[Branch],
    options: &ChainOptions,
    jobs: usize,
) -> Result<Vec<SweepRow>> {
    Ok(sweep_results(dims, branches, options, jobs)?.iter().map(SweepRow::from).collect())
}

/// Geometric-tail (Aitken) limit of three successive terms `q_a, q_b, q_c`.
///
/// Falls back to the last term when the differences do not contract, which
/// is what happens once they reach rounding level.
pub fn extrapolate_limit(q: [f64; 3]) -> f64 {
    let d1 = q[1] - q[0];
    let d2 = q[2] - q[1];
    let ratio = d2 / d1;
    if !ratio.is_finite() || ratio.abs() >= 1.0 {
        return q[2];
    }
    q[2] - d2 * d2 / (d2 - d1)
}

/// Outcome of checking a chain solution against the single-operator
/// optimality conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityReport {
    /// Gain from replacing `A_1, A_2, A_3, B_1, B_2, B_3` by the best projector.
    pub gains: [f64; 6],
    pub max_gain: f64,
    /// Gain from re-optimizing the state for the built operators.
    pub state_gain: f64,
    /// `c_1 > 0`, which makes `A^1_11 = 1` optimal.
    pub c1_positive: bool,
    /// `c_{n−1} ≥ 0` on the `0` branch, `c_{n−1} ≤ 0` on the `−1` branch.
    pub branch_consistent: bool,
    pub min_lambda: f64,
    pub lambda_positive: bool,
}

impl OptimalityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_gain < tol
            && self.state_gain < tol
            && self.c1_positive
            && self.branch_consistent
            && self.lambda_positive
    }
}

/// Smallest `λ_i` still counted as strictly positive.
pub const LAMBDA_FLOOR: f64 = 1e-14;

pub fn verify_optimality(params: &ChainParams) -> Result<OptimalityReport> {
    let expr = builtin_i3322();
    let (alice, bob) = build_operators(params)?;
    let state = params.state()?;
    let mut gains = [0.0; 6];
    for mu in 1..=3 {
        let x = build_x(&expr, &bob, &state, mu)?;
        let best = positive_spectral_projector(&x)?;
        let cur = (alice[mu - 1].matrix() * &x).trace();
        gains[mu - 1] = ((best.matrix() * &x).trace() - cur).max(0.0);
    }
    for nu in 1..=3 {
        let y = build_y(&expr, &alice, &state, nu)?;
        let best = positive_spectral_projector(&y)?;
        let cur = (bob[nu - 1].matrix() * &y).trace();
        gains[2 + nu] = ((best.matrix() * &y).trace() - cur).max(0.0);
    }
    let value = evaluate_quantum_value(&expr, &alice, &bob, &state)?;
    let (top, _) = step_state(&expr, &alice, &bob)?;
    let n = params.n;
    let c_prev = params.c[n - 1];
    let min_lambda = params.lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(OptimalityReport {
        gains,
        max_gain: gains.iter().cloned().fold(0.0, f64::max),
        state_gain: (top - value).max(0.0),
        c1_positive: params.c[1] > 0.0,
        branch_consistent: match params.branch {
            Branch::Zero => c_prev >= 0.0,
            Branch::MinusOne => c_prev <= 0.0,
        },
        min_lambda,
        lambda_positive: min_lambda >= LAMBDA_FLOOR,
    })
}
