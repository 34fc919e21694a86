use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{Projector, StateVector};
use crate::eigen::symmetrize;
use crate::scalar::Scalar;

/// Number of random plane rotations per matrix entry (`5·n²` in total).
pub const ROTATIONS_PER_ENTRY: usize = 5;

/// Platform-independent seeded generator.
///
/// Independent streams of one seed serve parallel restarts: the stream of
/// restart `k` does not depend on how many other restarts ran before it.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Applies `P ← G·P·G*` for the plane rotation `G` acting on coordinates
/// `(p, q)` with angle `theta` and relative phase `phase`.
fn rotate<T: Scalar>(m: &mut DMatrix<T>, p: usize, q: usize, theta: f64, phase: T) {
    let (s, c) = theta.sin_cos();
    let (c, s) = (T::from_real(c), T::from_real(s));
    let n = m.nrows();
    for k in 0..n {
        let (a, b) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * a - s * phase * b;
        m[(q, k)] = s * phase.conjugate() * a + c * b;
    }
    for k in 0..n {
        let (a, b) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * a - s * phase.conjugate() * b;
        m[(k, q)] = s * phase * a + c * b;
    }
}

/// Random projector: independent 0/1 diagonal entries mixed by `5·n²`
/// random plane rotations on uniformly chosen coordinate pairs.
pub fn random_projector<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Projector<T> {
    let bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut m = Projector::<T>::diagonal(&bits).into_matrix();
    if n > 1 {
        for _ in 0..ROTATIONS_PER_ENTRY * n * n {
            let p = rng.gen_range(0..n);
            let mut q = rng.gen_range(0..n - 1);
            if q >= p {
                q += 1;
            }
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let phase = T::random_phase(rng);
            rotate(&mut m, p, q, theta, phase);
        }
    }
    Projector::from_matrix_unchecked(symmetrize(&m))
}

/// Strictly positive uniform entries, normalized to unit Euclidean norm.
pub fn random_state<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector<T> {
    let coeffs = DVector::from_fn(n, |_, _| loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            break T::from_real(x);
        }
    });
    StateVector::new(coeffs).expect("positive entries")
}
