mod common;

use fluxspec::specialfn::{jacobi_derivative, jacobi_eval, jacobi_eval_sum, negative_param_relation_check};
use fluxspec::JacobiSpec;
use proptest::prelude::*;

const PARAMS: [f64; 6] = [-0.9, -0.5, 0.0, 0.5, 1.0, 2.7];
const ZS: [f64; 5] = [-0.99, -0.5, 0.0, 0.5, 0.99];

#[test]
fn recurrence_matches_explicit_sum() {
    for n in 0..=10 {
        for a in PARAMS {
            for b in PARAMS {
                for z in ZS {
                    let s = JacobiSpec::new(n, a, b);
                    let (v, w) = (jacobi_eval(s, z), jacobi_eval_sum(s, z));
                    assert!((v - w).abs() <= 1e-10 * (1.0 + v.abs()), "n={n} a={a} b={b} z={z}: {v} vs {w}");
                }
            }
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for n in 0..=10 {
        for a in PARAMS {
            for b in PARAMS {
                for z in [-0.5, 0.0, 0.5] {
                    let s = JacobiSpec::new(n, a, b);
                    let fd = common::derivative(&|t| jacobi_eval(s, t), z, 1e-3);
                    assert!((jacobi_derivative(s, z) - fd).abs() <= 1e-6, "n={n} a={a} b={b} z={z}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn reflection_symmetry(n in 0usize..12, a in -0.95f64..6.0, b in -0.95f64..6.0, z in -1.0f64..1.0) {
        let lhs = jacobi_eval(JacobiSpec::new(n, a, b), -z);
        let rhs = if n % 2 == 0 { 1.0 } else { -1.0 } * jacobi_eval(JacobiSpec::new(n, b, a), z);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn value_at_one_is_binomial(n in 0usize..15, a in -5.0f64..8.0, b in -5.0f64..8.0) {
        let v = jacobi_eval(JacobiSpec::new(n, a, b), 1.0);
        let c = common::binomial(n as f64 + a, n);
        prop_assert!((v - c).abs() <= 1e-12 * c.abs().max(1.0), "{} vs {}", v, c);
    }

    #[test]
    fn agrees_with_oracle_for_any_parameters(n in 0usize..16, a in -12.0f64..12.0, b in -12.0f64..12.0, z in -0.99f64..0.99) {
        let v = jacobi_eval(JacobiSpec::new(n, a, b), z);
        let w = common::jacobi(n, a, b, z);
        let scale = (0..=20).map(|k| common::jacobi(n, a, b, -1.0 + k as f64 / 10.0).abs()).fold(1e-300f64, f64::max);
        prop_assert!((v - w).abs() <= 1e-10 * scale, "{} vs {}", v, w);
    }

    #[test]
    fn integer_parameter_relations(n in 0usize..=8, a in 0u32..=5, b in 0u32..=5, z in -0.999f64..0.999) {
        let r = negative_param_relation_check(n, a as f64, b as f64, z).unwrap();
        prop_assert!(r.first.unwrap() <= 1e-10);
        prop_assert!(r.second.unwrap() <= 1e-10);
    }
}
