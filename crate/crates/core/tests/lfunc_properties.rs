use std::sync::OnceLock;

use mahlerlab::lfunc::{builtin_curves, find_curve, l_e_2, CurveSpec};
use proptest::prelude::*;

const COEFF_RANGE: usize = 40_000;
/// Terms in the naive Dirichlet partial sum of `L(E, 2)`.
const NAIVE_TERMS: usize = 100_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

fn table() -> &'static Vec<(CurveSpec, Vec<i64>)> {
    static TABLE: OnceLock<Vec<(CurveSpec, Vec<i64>)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        builtin_curves()
            .into_iter()
            .map(|c| {
                let a = c.an_coeffs(COEFF_RANGE).unwrap();
                (c, a)
            })
            .collect()
    })
}

#[test]
fn hasse_bound_at_good_primes() {
    for c in builtin_curves() {
        for p in primes_below(2000).into_iter().filter(|&p| !c.is_bad_prime(p)) {
            let a = c.ap_good(p);
            assert!((a * a) as f64 <= 4.0 * p as f64, "{}: a_{p} = {a}", c.label);
        }
    }
}

#[test]
fn bad_primes_have_multiplicative_or_additive_traces() {
    for c in builtin_curves() {
        for p in [2u64, 3, 5, 7] {
            if c.is_bad_prime(p) {
                let a = c.ap(p).unwrap();
                assert!((-1..=1).contains(&a), "{}: a_{p} = {a}", c.label);
                if c.conductor % (p * p) == 0 {
                    assert_eq!(a, 0, "{}: additive reduction at {p}", c.label);
                }
            }
        }
    }
}

#[test]
fn cm_curve_vanishes_at_inert_primes() {
    let curves = builtin_curves();
    let e36 = find_curve(&curves, "E_36").unwrap();
    for p in primes_below(2000).into_iter().filter(|p| p % 3 == 2 && !e36.is_bad_prime(*p)) {
        assert_eq!(e36.ap_good(p), 0, "a_{p}");
    }
}

#[test]
fn isogenous_curves_share_coefficients() {
    // each curve and its partner of the same conductor have equal a_n
    let curves = builtin_curves();
    for n in [14, 20, 36] {
        let a = find_curve(&curves, &format!("E_{n}")).unwrap().an_coeffs(500).unwrap();
        let b = find_curve(&curves, &format!("Ehat_{n}")).unwrap().an_coeffs(500).unwrap();
        assert_eq!(a, b, "conductor {n}");
    }
}

#[test]
fn l_value_does_not_depend_on_the_cutoff() {
    for c in builtin_curves() {
        let values: Vec<f64> = [0.7, 1.0, 1.4].iter().map(|&t| l_e_2(&c, t).unwrap()).collect();
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-9, "{}: {values:?}", c.label);
    }
}

#[test]
fn naive_partial_sum_approaches_the_l_value() {
    for c in builtin_curves().iter().take(3) {
        let a = c.an_coeffs(NAIVE_TERMS).unwrap();
        let naive: f64 = a.iter().enumerate().map(|(i, &an)| an as f64 / ((i + 1) as f64).powi(2)).sum();
        let smooth = l_e_2(c, 1.0).unwrap();
        assert!((naive - smooth).abs() < 1e-3, "{}: {naive} vs {smooth}", c.label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn coefficients_are_multiplicative(idx in 0usize..6, m in 1u64..200, n in 1u64..200) {
        prop_assume!(gcd(m, n) == 1);
        let (c, a) = &table()[idx];
        let at = |k: u64| a[k as usize - 1];
        prop_assert_eq!(at(m * n), at(m) * at(n), "{}: m={} n={}", c.label, m, n);
    }

    #[test]
    fn prime_power_recursion(idx in 0usize..6, pi in 0usize..11) {
        let (c, a) = &table()[idx];
        let p = primes_below(34)[pi];
        let at = |k: u64| a[k as usize - 1];
        let eps = if c.is_bad_prime(p) { 0 } else { p as i64 };
        let (p2, p3) = (p * p, p * p * p);
        prop_assert_eq!(at(p2), at(p) * at(p) - eps);
        prop_assert_eq!(at(p3), at(p) * at(p2) - eps * at(p));
    }
}
