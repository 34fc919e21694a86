mod common;

use bellsaw::bell::{
    classical_bound, evaluate_quantum_value, evaluate_quantum_value_complex, parse_bell_expression,
    serialize_bell_expression, BellExpression, Projector, StateVector,
};
use bellsaw::eigen::{random_projector, random_state, SeededRng};
use bellsaw::seesaw::{run_seesaw, SeesawConfig};
use common::{kron_value, random_expression};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn setup<T: bellsaw::Scalar>(
    m_a: usize,
    m_b: usize,
    n: usize,
    seed: u64,
) -> (Vec<Projector<T>>, Vec<Projector<T>>, StateVector<T>) {
    let mut rng = SeededRng::new(seed);
    let alice = (0..m_a).map(|_| random_projector(n, &mut rng)).collect();
    let bob = (0..m_b).map(|_| random_projector(n, &mut rng)).collect();
    (alice, bob, random_state(n, &mut rng))
}

fn coefficients() -> impl Strategy<Value = BellExpression> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m_a, m_b)| {
        prop::collection::vec(-10.0f64..10.0, (m_a + 1) * (m_b + 1)).prop_map(move |v| {
            BellExpression::new(DMatrix::from_row_slice(m_a + 1, m_b + 1, &v)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_is_linear(seed in any::<u64>(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0, n in 1usize..5) {
        let mut rng = SeededRng::new(seed);
        let e1 = random_expression(3, 2, &mut rng);
        let e2 = random_expression(3, 2, &mut rng);
        let (a, b, s) = setup::<Complex64>(3, 2, n, seed);
        let combined = (&(alpha * &e1) + &(beta * &e2)).unwrap();
        let lhs = evaluate_quantum_value(&combined, &a, &b, &s).unwrap();
        let rhs = alpha * evaluate_quantum_value(&e1, &a, &b, &s).unwrap()
            + beta * evaluate_quantum_value(&e2, &a, &b, &s).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn value_matches_kronecker_real(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = SeededRng::new(seed ^ 1);
        let e = random_expression(2, 3, &mut rng);
        let (a, b, s) = setup::<f64>(2, 3, n, seed);
        let v = evaluate_quantum_value(&e, &a, &b, &s).unwrap();
        prop_assert!((v - kron_value(&e, &a, &b, &s).re).abs() < 1e-12);
    }

    #[test]
    fn value_matches_kronecker_complex(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = SeededRng::new(seed ^ 2);
        let e = random_expression(3, 3, &mut rng);
        let (a, b, mut s) = setup::<Complex64>(3, 3, n, seed);
        // Complex Schmidt coefficients exercise the conjugation convention.
        let mut coeffs = s.coeffs().clone();
        for (k, x) in coeffs.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, 0.7 * k as f64 + 0.3);
        }
        s = StateVector::new(coeffs).unwrap();
        let v = evaluate_quantum_value_complex(&e, &a, &b, &s).unwrap();
        let oracle = kron_value(&e, &a, &b, &s);
        prop_assert!((v - oracle).norm() < 1e-12);
        prop_assert!(oracle.im.abs() < 1e-12);
    }

    #[test]
    fn canonical_form_keeps_value(seed in any::<u64>(), n in 1usize..5) {
        let e = random_expression(2, 2, &mut SeededRng::new(seed ^ 3));
        let (a, b, s) = setup::<Complex64>(2, 2, n, seed);
        let coeffs = s.coeffs().map(|x| x * Complex64::from_polar(1.0, x.re * 9.0));
        let s = StateVector::new(coeffs).unwrap();
        let (canon, a2) = s.canonical(&a);
        prop_assert!(canon.is_canonical());
        let v1 = evaluate_quantum_value(&e, &a, &b, &s).unwrap();
        let v2 = evaluate_quantum_value(&e, &a2, &b, &canon).unwrap();
        prop_assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn classical_bound_invariant_under_relabeling(e in coefficients(), shift in 0usize..4) {
        let (m_a, m_b) = (e.m_a(), e.m_b());
        let perm_a: Vec<usize> = (0..m_a).map(|k| (k + shift) % m_a).collect();
        let perm_b: Vec<usize> = (0..m_b).rev().collect();
        let base = classical_bound(&e).unwrap();
        let relabeled = classical_bound(&e.permuted(&perm_a, &perm_b).unwrap()).unwrap();
        let swapped = classical_bound(&e.swapped()).unwrap();
        prop_assert!((base - relabeled).abs() < 1e-12);
        prop_assert!((base - swapped).abs() < 1e-12);
    }

    #[test]
    fn deterministic_strategies_reach_classical_bound(e in coefficients()) {
        let (m_a, m_b) = (e.m_a(), e.m_b());
        let state = StateVector::<f64>::from_real(&[1.0]).unwrap();
        let one = |bit: bool| if bit { Projector::identity(1) } else { Projector::zero(1) };
        let mut best = f64::NEG_INFINITY;
        for a_bits in 0u32..1 << m_a {
            let alice: Vec<_> = (0..m_a).map(|k| one(a_bits >> k & 1 == 1)).collect();
            for b_bits in 0u32..1 << m_b {
                let bob: Vec<_> = (0..m_b).map(|k| one(b_bits >> k & 1 == 1)).collect();
                let v = evaluate_quantum_value(&e, &alice, &bob, &state).unwrap();
                let direct: f64 = (0..=m_a)
                    .flat_map(|mu| (0..=m_b).map(move |nu| (mu, nu)))
                    .filter(|&(mu, nu)| {
                        (mu == 0 || a_bits >> (mu - 1) & 1 == 1) && (nu == 0 || b_bits >> (nu - 1) & 1 == 1)
                    })
                    .map(|(mu, nu)| e.coeff(mu, nu))
                    .sum();
                prop_assert!((v - direct).abs() < 1e-12);
                best = best.max(v);
            }
        }
        prop_assert!((best - classical_bound(&e).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn parse_inverts_serialize(e in coefficients()) {
        let text = serialize_bell_expression(&e);
        prop_assert_eq!(parse_bell_expression(&text).unwrap(), e);
    }

    #[test]
    fn seesaw_history_nondecreasing(seed in any::<u64>(), m_a in 1usize..=4, m_b in 1usize..=4, n in 1usize..=5) {
        let e = random_expression(m_a, m_b, &mut SeededRng::new(seed));
        let config = SeesawConfig::new(n).restarts(1).seed(seed);
        let r = run_seesaw::<f64>(&e, &config).unwrap();
        prop_assert!(r.value_history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        prop_assert!(r.alice.iter().chain(&r.bob).all(|p| p.is_valid()));
        let v = evaluate_quantum_value(&e, &r.alice, &r.bob, &r.state).unwrap();
        prop_assert!((v - r.value).abs() < 1e-12);
    }
}
