//! Alternating maximization of a Bell expression at fixed local dimension.
//!
//! One cycle optimizes Alice's projectors for fixed Bob and state, then Bob's
//! projectors, then the state. Each step solves its block exactly (a
//! positive spectral projector or a top eigenvector), so the value can only
//! go up. Random restarts take the best run.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::bell::{evaluate_quantum_value, BellExpression, Projector, StateVector};
use crate::eigen::{largest_eigenpair, positive_spectral_projector, random_projector, random_state, SeededRng};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Abandon a run once at least `count` state components have fallen below
/// `threshold` in modulus, checked from cycle `grace` onwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStop {
    pub threshold: f64,
    pub count: usize,
    pub grace: usize,
}

impl EarlyStop {
    /// `θ = 1e-4`, `k = ⌈n/4⌉`, `g = 50`.
    pub fn for_dim(n: usize) -> Self {
        Self { threshold: 1e-4, count: n.div_ceil(4).max(1), grace: 50 }
    }

    fn triggered<T: Scalar>(&self, cycle: usize, state: &StateVector<T>) -> bool {
        cycle >= self.grace
            && state.coeffs().iter().filter(|x| x.modulus() < self.threshold).count() >= self.count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawConfig {
    pub dim: usize,
    pub tol_value: f64,
    pub max_cycles: usize,
    pub restarts: usize,
    pub early_stop: Option<EarlyStop>,
    pub seed: u64,
    /// Worker threads for restarts; results do not depend on it.
    pub jobs: usize,
}

impl SeesawConfig {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            tol_value: 1e-12,
            max_cycles: 10_000,
            restarts: 100,
            early_stop: None,
            seed: 0,
            jobs: 1,
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(self.tol_value > 0.0) {
            return Err(Error::InvalidArgument("tol_value must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("at least one restart is required".into()));
        }
        if self.max_cycles == 0 {
            return Err(Error::InvalidArgument("max_cycles must be positive".into()));
        }
        Ok(())
    }
}

/// Best solution found over all restarts.
#[derive(Debug, Clone)]
pub struct SeesawResult<T: Scalar> {
    pub value: f64,
    pub alice: Vec<Projector<T>>,
    pub bob: Vec<Projector<T>>,
    pub state: StateVector<T>,
    pub cycles_used: usize,
    pub restart_index: usize,
    pub converged: bool,
    pub early_stopped: bool,
    /// Value after every cycle of the winning run.
    pub value_history: Vec<f64>,
    pub restarts_run: usize,
    pub restarts_abandoned: usize,
}

fn check_inputs<T: Scalar>(ops: &[Projector<T>], expected: usize, state: &StateVector<T>) -> Result<()> {
    if ops.len() != expected {
        return Err(Error::dim(format!("expected {expected} operators, got {}", ops.len())));
    }
    if let Some(p) = ops.iter().find(|p| p.dim() != state.dim()) {
        return Err(Error::dim(format!(
            "operator of dimension {} with a state of dimension {}",
            p.dim(),
            state.dim()
        )));
    }
    Ok(())
}

/// Alice's matrix `X_μ` with `X^μ_{ji} = Σ_ν M_{μν} B^ν_{ij} conj(λ_i) λ_j`,
/// so that the Bell value is `Σ_μ tr(A_μ X_μ)`.
pub fn build_x<T: Scalar>(
    expr: &BellExpression,
    bob: &[Projector<T>],
    state: &StateVector<T>,
    mu: usize,
) -> Result<DMatrix<T>> {
    check_inputs(bob, expr.m_b(), state)?;
    if mu > expr.m_a() {
        return Err(Error::InvalidArgument(format!("setting {mu} out of range 0..={}", expr.m_a())));
    }
    Ok(side_matrix((0..=expr.m_b()).map(|nu| expr.coeff(mu, nu)), bob, state))
}

/// Bob's counterpart of [`build_x`]: `Y^ν_{ji} = Σ_μ M_{μν} A^μ_{ij} conj(λ_i) λ_j`.
pub fn build_y<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    state: &StateVector<T>,
    nu: usize,
) -> Result<DMatrix<T>> {
    check_inputs(alice, expr.m_a(), state)?;
    if nu > expr.m_b() {
        return Err(Error::InvalidArgument(format!("setting {nu} out of range 0..={}", expr.m_b())));
    }
    Ok(side_matrix((0..=expr.m_a()).map(|mu| expr.coeff(mu, nu)), alice, state))
}

fn side_matrix<T: Scalar>(
    weights: impl Iterator<Item = f64>,
    ops: &[Projector<T>],
    state: &StateVector<T>,
) -> DMatrix<T> {
    let n = state.dim();
    let l = state.coeffs();
    let mut sum = DMatrix::<T>::zeros(n, n);
    for (k, w) in weights.enumerate() {
        if w == 0.0 {
            continue;
        }
        let w = T::from_real(w);
        if k == 0 {
            for i in 0..n {
                sum[(i, i)] += w;
            }
        } else {
            sum += ops[k - 1].matrix() * w;
        }
    }
    DMatrix::from_fn(n, n, |j, i| sum[(i, j)] * l[i].conjugate() * l[j])
}

/// Optimal Alice projectors for fixed Bob operators and state.
pub fn step_alice<T: Scalar>(
    expr: &BellExpression,
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<Vec<Projector<T>>> {
    (1..=expr.m_a())
        .map(|mu| positive_spectral_projector(&build_x(expr, bob, state, mu)?))
        .collect()
}

/// Optimal Bob projectors for fixed Alice operators and state.
pub fn step_bob<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<Vec<Projector<T>>> {
    (1..=expr.m_b())
        .map(|nu| positive_spectral_projector(&build_y(expr, alice, state, nu)?))
        .collect()
}

/// `K_ij = Σ_{μν} M_{μν} A^μ_ij B^ν_ij`; the Bell value is `λ† K λ`.
pub fn state_matrix<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
) -> Result<DMatrix<T>> {
    if alice.len() != expr.m_a() || bob.len() != expr.m_b() {
        return Err(Error::dim("operator counts do not match the expression"));
    }
    let n = alice
        .first()
        .or(bob.first())
        .map(Projector::dim)
        .ok_or_else(|| Error::dim("no operators"))?;
    if alice.iter().chain(bob).any(|p| p.dim() != n) {
        return Err(Error::dim("operators of different dimensions"));
    }
    let identity = DMatrix::<T>::identity(n, n);
    let side = |ops: &[Projector<T>], k: usize| -> DMatrix<T> {
        if k == 0 {
            identity.clone()
        } else {
            ops[k - 1].matrix().clone()
        }
    };
    let mut k = DMatrix::<T>::zeros(n, n);
    for mu in 0..=expr.m_a() {
        // Row sum over ν first: Σ_ν M_μν B^ν.
        let mut b_sum = DMatrix::<T>::zeros(n, n);
        let mut any = false;
        for nu in 0..=expr.m_b() {
            let m = expr.coeff(mu, nu);
            if m != 0.0 {
                b_sum += side(bob, nu) * T::from_real(m);
                any = true;
            }
        }
        if any {
            k += side(alice, mu).component_mul(&b_sum);
        }
    }
    Ok(k)
}

/// Optimal state for fixed operators: the top eigenvector of [`state_matrix`].
/// The eigenvalue is the Bell value. Signs and phases are kept as they come.
pub fn step_state<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
) -> Result<(f64, StateVector<T>)> {
    let k = state_matrix(expr, alice, bob)?;
    let (value, v) = largest_eigenpair(&k)?;
    Ok((value, StateVector::from_unit_unchecked(v)))
}

/// Largest gain any single step can still make; zero at a fixed point of
/// all three steps.
pub fn stationarity_residual<T: Scalar>(
    expr: &BellExpression,
    alice: &[Projector<T>],
    bob: &[Projector<T>],
    state: &StateVector<T>,
) -> Result<f64> {
    let current = evaluate_quantum_value(expr, alice, bob, state)?;
    let alice_best = step_alice(expr, bob, state)?;
    let gain_a = evaluate_quantum_value(expr, &alice_best, bob, state)? - current;
    let bob_best = step_bob(expr, alice, state)?;
    let gain_b = evaluate_quantum_value(expr, alice, &bob_best, state)? - current;
    let (top, _) = step_state(expr, alice, bob)?;
    let gain_s = top - current;
    Ok(gain_a.max(gain_b).max(gain_s).max(0.0))
}

struct RunOutcome<T: Scalar> {
    value: f64,
    alice: Vec<Projector<T>>,
    bob: Vec<Projector<T>>,
    state: StateVector<T>,
    history: Vec<f64>,
    converged: bool,
    abandoned: bool,
}

fn iterate<T: Scalar>(
    expr: &BellExpression,
    config: &SeesawConfig,
    mut bob: Vec<Projector<T>>,
    mut state: StateVector<T>,
) -> Result<RunOutcome<T>> {
    let mut alice = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    let mut abandoned = false;
    for cycle in 1..=config.max_cycles {
        alice = step_alice(expr, &bob, &state)?;
        bob = step_bob(expr, &alice, &state)?;
        let (value, next) = step_state(expr, &alice, &bob)?;
        state = next;
        let improvement = history.last().map(|prev| value - prev);
        history.push(value);
        if improvement.is_some_and(|d| d < config.tol_value) {
            converged = true;
            break;
        }
        if config.early_stop.is_some_and(|rule| rule.triggered(cycle, &state)) {
            abandoned = true;
            break;
        }
    }
    Ok(RunOutcome {
        value: *history.last().expect("at least one cycle"),
        alice,
        bob,
        state,
        history,
        converged,
        abandoned,
    })
}

fn single_restart<T: Scalar>(
    expr: &BellExpression,
    config: &SeesawConfig,
    index: usize,
) -> Result<RunOutcome<T>> {
    let mut rng = SeededRng::with_stream(config.seed, index as u64);
    let n = config.dim;
    let bob = (0..expr.m_b()).map(|_| random_projector::<T, _>(n, &mut rng)).collect();
    let state = random_state::<T, _>(n, &mut rng);
    iterate(expr, config, bob, state)
}

fn into_result<T: Scalar>(run: RunOutcome<T>, index: usize, restarts_run: usize, abandoned: usize) -> SeesawResult<T> {
    SeesawResult {
        value: run.value,
        cycles_used: run.history.len(),
        alice: run.alice,
        bob: run.bob,
        state: run.state,
        restart_index: index,
        converged: run.converged,
        early_stopped: run.abandoned,
        value_history: run.history,
        restarts_run,
        restarts_abandoned: abandoned,
    }
}

/// Runs `config.restarts` independent see-saw runs from random starts and
/// keeps the best. Restart `k` draws from stream `k` of `config.seed`, so
/// the result is the same for any `config.jobs`.
pub fn run_seesaw<T: Scalar>(expr: &BellExpression, config: &SeesawConfig) -> Result<SeesawResult<T>> {
    config.validate()?;
    let runs: Vec<Result<RunOutcome<T>>> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..config.restarts)
                .into_par_iter()
                .map(|k| single_restart(expr, config, k))
                .collect()
        })
    } else {
        (0..config.restarts).map(|k| single_restart(expr, config, k)).collect()
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let abandoned = runs.iter().filter(|r| r.abandoned).count();
    let all_abandoned = abandoned == runs.len();
    let mut best: Option<(usize, RunOutcome<T>)> = None;
    for (k, run) in runs.into_iter().enumerate() {
        if run.abandoned && !all_abandoned {
            continue;
        }
        // Strictly greater keeps the lowest restart index on ties.
        if best.as_ref().map_or(true, |(_, b)| run.value > b.value) {
            best = Some((k, run));
        }
    }
    let (index, run) = best.expect("at least one restart");
    Ok(into_result(run, index, config.restarts, abandoned))
}

/// One see-saw run from a given Bob configuration and state.
pub fn run_seesaw_from<T: Scalar>(
    expr: &BellExpression,
    config: &SeesawConfig,
    bob: Vec<Projector<T>>,
    state: StateVector<T>,
) -> Result<SeesawResult<T>> {
    config.validate()?;
    check_inputs(&bob, expr.m_b(), &state)?;
    let run = iterate(expr, config, bob, state)?;
    let abandoned = usize::from(run.abandoned);
    Ok(into_result(run, 0, 1, abandoned))
}
