use mahlerlab::hyperg::special::{hyp2f1_13_23, ramanujan_parameter, ramanujan_rhs};
use mahlerlab::hyperg::{dg_dk, dgt_dk, f_continuation_neg, f_continuation_pos, f_series, hyp2f1_series};
use mahlerlab::mahler::{g_boyd, g_tilde};
use proptest::prelude::*;

const H: f64 = 1e-3;

fn central<F: Fn(f64) -> f64>(f: F, k: f64) -> f64 {
    (f(k + H) - f(k - H)) / (2.0 * H)
}

#[test]
fn continuations_overlap_the_series() {
    for i in 1..=9 {
        let z = 0.01 * i as f64;
        let pos = f_continuation_pos(z).unwrap();
        let neg = f_continuation_neg(-z).unwrap();
        assert!((f_series(z).unwrap() - pos).abs() < 1e-9, "z={z}");
        assert!((f_series(-z).unwrap() - neg).abs() < 1e-9, "z=-{z}");
    }
}

#[test]
fn derivative_matches_difference_quotients_of_g() {
    let g = |k: f64| g_boyd(k, 1e-13).unwrap().value;
    for k in [-4.0, -2.0, 3.0, 6.0, 7.0, 9.0, 10.0, 12.0] {
        let fd = central(g, k);
        let exact = dg_dk(k).unwrap();
        assert!((fd - exact).abs() < 1e-5, "k={k}: fd {fd} formula {exact}");
    }
}

#[test]
fn tilde_derivative_matches_difference_quotients() {
    let g = |k: f64| g_tilde(k, 1e-13).unwrap().value;
    for k in [-8.0, -4.0, -2.0, -1.5, 1.0, 2.0, 3.0] {
        let fd = central(g, k);
        let exact = dgt_dk(k).unwrap();
        assert!((fd - exact).abs() < 1e-5, "k={k}: fd {fd} formula {exact}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ramanujan_transformation_holds(w in 0.0..0.95f64) {
        let (p, q) = ramanujan_parameter(w).unwrap();
        let lhs = hyp2f1_series(1.0 / 3.0, 2.0 / 3.0, 1.0, w).unwrap();
        let rhs = ramanujan_rhs(p, q).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs, "w={w}: {lhs} {rhs}");
    }

    #[test]
    fn ramanujan_parameter_is_complementary(w in 0.0..0.999_999f64) {
        let (p, q) = ramanujan_parameter(w).unwrap();
        prop_assert!((p + q - 1.0).abs() < 1e-14);
        let back = 27.0 * p * p * (1.0 + p).powi(2) / (4.0 * (1.0 + p + p * p).powi(3));
        prop_assert!((back - w).abs() < 1e-13);
    }

    #[test]
    fn hypergeometric_is_increasing(a in -20.0..0.999f64, b in -20.0..0.999f64) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(hyp2f1_13_23(lo).unwrap() <= hyp2f1_13_23(hi).unwrap());
    }

    #[test]
    fn derivative_log_singularity_is_symmetric_at_eight(eps in 1e-8..1e-5f64) {
        // both sides diverge like the same multiple of log|k - 8|
        let l = dg_dk(8.0 - eps).unwrap();
        let r = dg_dk(8.0 + eps).unwrap();
        prop_assert!((l - r).abs() < 1e-3, "{l} {r}");
    }
}

#[test]
fn series_and_transformed_routes_join_at_the_switch() {
    for w in [0.95 - 1e-12, 0.95 + 1e-12, -0.95 - 1e-12, -0.95 + 1e-12] {
        let got = hyp2f1_13_23(w).unwrap();
        let reference = hyp2f1_series(1.0 / 3.0, 2.0 / 3.0, 1.0, w.clamp(-0.95, 0.95)).unwrap();
        assert!((got - reference).abs() < 1e-10, "w={w}");
    }
}
