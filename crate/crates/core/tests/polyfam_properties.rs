use std::f64::consts::PI;

use mahlerlab::polyfam::{b_of, bosman_q, boyd_p, delta_expanded, delta_of, eval, q_tilde_eval, BivariatePolynomial};
use num_complex::Complex64;
use proptest::prelude::*;

fn torus(a: f64, b: f64) -> (Complex64, Complex64) {
    (Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b))
}

fn nonzero_k() -> impl Strategy<Value = f64> {
    prop_oneof![-10.0..-1.0f64, (0.0..10.0f64).prop_filter("k > 0", |k| *k > 0.0)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn factored_and_expanded_delta_agree(k in -10.0..10.0f64, theta in -PI..PI) {
        let b = b_of(k, theta);
        let scale = b * b + 4.0;
        prop_assert!((delta_of(k, theta) - delta_expanded(k, theta)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn b_has_the_sign_of_k_where_delta_is_positive(k in nonzero_k(), theta in -PI..PI) {
        if delta_of(k, theta) > 0.0 {
            prop_assert_eq!(b_of(k, theta).signum(), k.signum());
        }
    }

    #[test]
    fn boyd_family_is_a_deformation_of_a_product(k in -20.0..20.0f64) {
        let lin = |c: &[(u32, u32, f64)]| BivariatePolynomial::from_terms(c.iter().copied());
        let product = lin(&[(1, 0, 1.0), (0, 0, 1.0)])
            .mul(&lin(&[(0, 1, 1.0), (0, 0, 1.0)]))
            .mul(&lin(&[(1, 0, 1.0), (0, 1, 1.0)]));
        let expected = product.add(&lin(&[(1, 1, -(2.0 - k))]));
        let got = boyd_p(k);
        for ((i, j), c) in got.terms().chain(expected.terms()) {
            let _ = c;
            prop_assert!((got.coeff(i, j) - expected.coeff(i, j)).abs() <= 1e-14 * (1.0 + k.abs()));
        }
    }

    #[test]
    fn q_is_the_rescaled_laurent_form(k in -10.0..10.0f64, a in -PI..PI, b in -PI..PI) {
        let (x, y) = torus(a, b);
        let direct = eval(&bosman_q(k), x, y);
        let rescaled = x.powi(4) * q_tilde_eval(k, x, y / (x * x));
        prop_assert!((direct - rescaled).norm() <= 1e-12 * direct.norm().max(1.0));
    }
}

#[test]
fn lemma1_dense_grid() {
    // a deterministic sweep alongside the random one
    for i in 0..200 {
        let k = if i < 100 { -10.0 + 9.0 * i as f64 / 100.0 } else { 0.1 * (i - 99) as f64 };
        for j in 0..2000 {
            let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / 2000.0;
            if delta_of(k, theta) > 0.0 {
                assert_eq!(b_of(k, theta).signum(), k.signum(), "k={k} theta={theta}");
            }
        }
    }
}
