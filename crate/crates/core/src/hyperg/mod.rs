//! The generating series `f(z)` of the constant terms, its Picard–Fuchs
//! structure, and the derivative formulas for `g(k)` and `g̃(k)`.

pub mod derivative;
pub mod radicand;
pub mod special;

use num_bigint::BigUint;

use crate::error::{Error, Result};
pub use derivative::{
    dg_dk, dg_dk_i1, dg_dk_lemma4, dg_dk_pform, dgt_dk, dgt_dk_tform, ellipk_quadrature,
    DerivativeBranch, DerivativeFormula,
};
use special::{hyp2f1_13_23_with_complement, CompensatedSum};
pub use special::{ellipk_agm, hyp2f1_series};

const TAIL_REL: f64 = 1e-17;
const TERM_CAP: usize = 100_000;
const RADIUS: f64 = 1.0 / 9.0;

/// Constant terms `Σ_j C(n,j)^2 C(2j,j)` for `n = 0..=n_max`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTSequence {
    coefficients: Vec<BigUint>,
}

impl CTSequence {
    pub fn new(n_max: usize) -> Self {
        // central[j] = C(2j, j)
        let mut central = Vec::with_capacity(n_max + 1);
        let mut c = BigUint::from(1u32);
        for j in 0..=n_max {
            central.push(c.clone());
            c = c * (4 * j as u64 + 2) / (j as u64 + 1);
        }
        let coefficients = (0..=n_max)
            .map(|n| {
                let mut sum = BigUint::from(0u32);
                let mut binom = BigUint::from(1u32);
                for (j, cj) in central.iter().enumerate().take(n + 1) {
                    sum += &binom * &binom * cj;
                    binom = binom * (n - j) as u64 / (j as u64 + 1);
                }
                sum
            })
            .collect();
        CTSequence { coefficients }
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.coefficients.get(n)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

pub fn ct_coeff(n: usize) -> BigUint {
    let mut seq = CTSequence::new(n);
    seq.coefficients.pop().unwrap_or_default()
}

/// The three-term recurrence read off from the Picard–Fuchs operator
/// `z(z-1)(9z-1) f'' + (27z^2 - 20z + 1) f' + 3(3z - 1) f`:
///
/// `(n+1)^2 a_{n+1} = (10n^2 + 10n + 3) a_n - 9n^2 a_{n-1}`, `a_1 = 3 a_0`.
///
/// Checked with exact integers on every index the slice allows.
pub fn pf_recurrence_holds(a: &[BigUint]) -> bool {
    if a.len() >= 2 && a[1] != &a[0] * 3u32 {
        return false;
    }
    (1..a.len().saturating_sub(1)).all(|n| {
        let n64 = n as u64;
        let lhs = &a[n + 1] * ((n64 + 1) * (n64 + 1)) + &a[n - 1] * (9 * n64 * n64);
        let rhs = &a[n] * (10 * n64 * n64 + 10 * n64 + 3);
        lhs == rhs
    })
}

pub fn pf_recurrence_check(n_max: usize) -> bool {
    pf_recurrence_holds(CTSequence::new(n_max).coefficients())
}

/// `f(z) = Σ a_n z^n` for `|z| < 1/9`, summed through the recurrence.
pub fn f_series(z: f64) -> Result<f64> {
    if !(z.abs() < RADIUS - 1e-6) {
        return Err(Error::domain(
            "f_series",
            format!("|z| = {} outside the disc of convergence 1/9", z.abs()),
        ));
    }
    // b_n = a_n z^n
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut acc = CompensatedSum::new();
    acc.add(cur);
    let mut small = 0;
    for n in 0..TERM_CAP {
        let nf = n as f64;
        let next = ((10.0 * nf * nf + 10.0 * nf + 3.0) * z * cur - 9.0 * nf * nf * z * z * prev)
            / ((nf + 1.0) * (nf + 1.0));
        acc.add(next);
        if next.abs() < TAIL_REL * acc.value().abs() {
            small += 1;
            if small == 2 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
        prev = cur;
        cur = next;
    }
    Err(Error::non_convergence(
        "f_series",
        format!("no convergence in {TERM_CAP} terms at z = {z}"),
    ))
}

/// `f(z)` for `z < 0` as `₂F₁(⅓,⅔;1; 27z^2(1-z)/(1-3z)^3) / (1-3z)`.
pub fn f_continuation_neg(z: f64) -> Result<f64> {
    if !(z < 0.0) || !z.is_finite() {
        return Err(Error::domain("f_continuation_neg", format!("z = {z} is not negative")));
    }
    let s = 1.0 - 3.0 * z;
    let cube = s * s * s;
    // 1 - w = (1-9z)/(1-3z)^3
    Ok(hyp2f1_13_23_with_complement(27.0 * z * z * (1.0 - z) / cube, (1.0 - 9.0 * z) / cube)? / s)
}

/// `f(z)` for `0 < z < 1/9` as `₂F₁(⅓,⅔;1; 27z(1-z)^2/(1+3z)^3) / (1+3z)`.
pub fn f_continuation_pos(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < RADIUS) {
        return Err(Error::domain(
            "f_continuation_pos",
            format!("z = {z} outside (0, 1/9)"),
        ));
    }
    let s = 1.0 + 3.0 * z;
    let cube = s * s * s;
    // 1 - w = (1-9z)^2/(1+3z)^3
    let gap = 1.0 - 9.0 * z;
    Ok(hyp2f1_13_23_with_complement(27.0 * z * (1.0 - z) * (1.0 - z) / cube, gap * gap / cube)? / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_constant_terms() {
        let want = [1u32, 3, 15, 93, 639, 4653];
        let seq = CTSequence::new(5);
        for (n, w) in want.iter().enumerate() {
            assert_eq!(seq.get(n).unwrap(), &BigUint::from(*w));
        }
        assert_eq!(ct_coeff(0), BigUint::from(1u32));
        assert_eq!(ct_coeff(2), BigUint::from(15u32));
        assert_eq!(ct_coeff(3), BigUint::from(93u32));
    }

    #[test]
    fn recurrence_holds_exactly() {
        assert!(pf_recurrence_check(10));
        assert!(pf_recurrence_check(1000));
    }

    #[test]
    fn perturbed_sequence_fails() {
        let seq = CTSequence::new(20);
        for idx in [0, 1, 7, 20] {
            let mut bad = seq.coefficients().to_vec();
            bad[idx] += 1u32;
            assert!(!pf_recurrence_holds(&bad), "index {idx}");
        }
    }

    #[test]
    fn series_matches_partial_sums() {
        assert_eq!(f_series(0.0).unwrap(), 1.0);
        let seq = CTSequence::new(60);
        let z = 0.03f64;
        let naive: f64 = seq
            .coefficients()
            .iter()
            .enumerate()
            .map(|(n, a)| a.to_string().parse::<f64>().unwrap() * z.powi(n as i32))
            .sum();
        assert!((f_series(z).unwrap() - naive).abs() < 1e-14);
    }

    #[test]
    fn series_domain() {
        assert!(f_series(1.0 / 9.0).is_err());
        assert!(f_series(-0.2).is_err());
        assert!(f_series(f64::NAN).is_err());
    }

    #[test]
    fn continuations_overlap_series() {
        let close = |a: f64, b: f64, tol: f64| assert!((a - b).abs() < tol, "{a} vs {b}");
        close(f_series(0.05).unwrap(), f_continuation_pos(0.05).unwrap(), 1e-12);
        close(f_series(-0.05).unwrap(), f_continuation_neg(-0.05).unwrap(), 1e-12);
        close(f_series(-0.02).unwrap(), f_continuation_neg(-0.02).unwrap(), 1e-12);
        close(f_series(0.09).unwrap(), f_continuation_pos(0.09).unwrap(), 1e-9);
        close(f_continuation_neg(-1e-12).unwrap(), 1.0, 1e-10);
        assert!(f_continuation_neg(0.0).is_err());
        assert!(f_continuation_pos(0.2).is_err());
    }
}
