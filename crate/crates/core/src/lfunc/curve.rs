//! Weierstrass models, point counts and Dirichlet coefficients.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a replacement for the built-in curve table.
pub const CURVES_ENV: &str = "MAHLERLAB_CURVES";

const BUILTIN_CURVES: &str = include_str!("../../data/curves.json");

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub label: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub conductor: u64,
    pub root_number: i8,
}

impl CurveSpec {
    pub fn discriminant(&self) -> i128 {
        let [a1, a2, a3, a4, a6] = [self.a1, self.a2, self.a3, self.a4, self.a6].map(i128::from);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    /// Checks the record against its own discriminant: the model must be
    /// nonsingular, the root number a sign, and the primes of bad reduction
    /// of the model must be exactly those dividing the conductor.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("curve {}: {msg}", self.label)));
        if self.root_number != 1 && self.root_number != -1 {
            return bad(format!("root number {} is not ±1", self.root_number));
        }
        if self.conductor == 0 {
            return bad("conductor must be positive".into());
        }
        let disc = self.discriminant();
        if disc == 0 {
            return bad("singular model (discriminant 0)".into());
        }
        let disc_primes = prime_factors(disc.unsigned_abs());
        let cond_primes = prime_factors(u128::from(self.conductor));
        if disc_primes != cond_primes {
            return bad(format!(
                "primes of the discriminant {disc_primes:?} differ from those of the conductor {cond_primes:?}"
            ));
        }
        Ok(())
    }

    pub fn is_bad_prime(&self, p: u64) -> bool {
        self.conductor.is_multiple_of(p)
    }

    fn reduced(&self, p: i64) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6].map(|a| a.rem_euclid(p))
    }

    /// Affine points of the model over `F_p`; counts the nonsingular ones
    /// only when `nonsingular_only` is set.
    fn brute_force_count(&self, p: u64, nonsingular_only: bool) -> u64 {
        let p = p as i64;
        let [a1, a2, a3, a4, a6] = self.reduced(p);
        let mut count = 0;
        for x in 0..p {
            let rhs = (((x + a2) * x + a4) % p * x + a6) % p;
            for y in 0..p {
                let lhs = (y * y + a1 * x * y + a3 * y) % p;
                if lhs != rhs {
                    continue;
                }
                if nonsingular_only {
                    let fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4).rem_euclid(p);
                    let fy = (2 * y + a1 * x + a3).rem_euclid(p);
                    if fx == 0 && fy == 0 {
                        continue;
                    }
                }
                count += 1;
            }
        }
        count
    }

    /// Affine points over `F_p` for odd `p`, one Legendre lookup per `x`.
    fn affine_count_odd(&self, p: u64) -> u64 {
        let pi = p as i64;
        let [a1, a2, a3, a4, a6] = self.reduced(pi);
        // roots[v] = #{y : y^2 = v}
        let mut roots = vec![0u8; p as usize];
        for y in 0..pi {
            roots[(y * y % pi) as usize] += 1;
        }
        (0..pi)
            .map(|x| {
                let rhs = (((x + a2) * x + a4) % pi * x + a6) % pi;
                let lin = (a1 * x + a3) % pi;
                let disc = (lin * lin + 4 * rhs) % pi;
                u64::from(roots[disc as usize])
            })
            .sum()
    }

    /// `a_p = p + 1 - #E(F_p)` for a prime of good reduction.
    pub fn ap_good(&self, p: u64) -> i64 {
        let affine = if p < 5 {
            self.brute_force_count(p, false)
        } else {
            self.affine_count_odd(p)
        };
        p as i64 + 1 - (affine as i64 + 1)
    }

    /// `a_p = p - #E_ns(F_p)` for a prime dividing the conductor.
    pub fn ap_bad(&self, p: u64) -> Result<i64> {
        let ns = self.brute_force_count(p, true) + 1;
        let ap = p as i64 - ns as i64;
        if !(-1..=1).contains(&ap) {
            return Err(Error::Structural(format!(
                "curve {}: a_{p} = {ap} at a bad prime (expected -1, 0 or 1)",
                self.label
            )));
        }
        Ok(ap)
    }

    pub fn ap(&self, p: u64) -> Result<i64> {
        if self.is_bad_prime(p) {
            self.ap_bad(p)
        } else {
            Ok(self.ap_good(p))
        }
    }

    /// `a_1, ..., a_{n_max}` (index 0 of the result is `a_1`).
    pub fn an_coeffs(&self, n_max: usize) -> Result<Vec<i64>> {
        if n_max == 0 {
            return Ok(Vec::new());
        }
        let spf = smallest_prime_factors(n_max);
        let primes: Vec<u64> = (2..=n_max).filter(|&n| spf[n] == n).map(|n| n as u64).collect();
        let traces: Vec<(u64, i64)> = primes
            .par_iter()
            .map(|&p| self.ap(p).map(|a| (p, a)))
            .collect::<Result<_>>()?;

        let mut a = vec![0i64; n_max + 1];
        a[1] = 1;
        for &(p, ap) in &traces {
            let bad = self.is_bad_prime(p);
            let p = p as usize;
            // prime powers
            let (mut prev, mut cur) = (1i64, ap);
            let mut q = p;
            loop {
                a[q] = cur;
                let next = if bad { ap * cur } else { ap * cur - p as i64 * prev };
                prev = cur;
                cur = next;
                match q.checked_mul(p) {
                    Some(n) if n <= n_max => q = n,
                    _ => break,
                }
            }
        }
        for n in 2..=n_max {
            // split n = p^e · rest with gcd(p, rest) = 1
            let p = spf[n];
            let mut pe = 1;
            let mut rest = n;
            while rest % p == 0 {
                rest /= p;
                pe *= p;
            }
            if rest > 1 {
                a[n] = a[pe] * a[rest];
            }
        }
        a.remove(0);
        Ok(a)
    }
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `spf[n]` is the least prime factor of `n` for `n ≥ 2`.
pub(crate) fn smallest_prime_factors(n_max: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..=n_max).collect();
    let mut i = 2;
    while i * i <= n_max {
        if spf[i] == i {
            for j in (i * i..=n_max).step_by(i) {
                if spf[j] == j {
                    spf[j] = i;
                }
            }
        }
        i += 1;
    }
    spf
}

pub fn parse_curves(json: &str) -> Result<Vec<CurveSpec>> {
    let curves: Vec<CurveSpec> =
        serde_json::from_str(json).map_err(|e| Error::Config(format!("curve table: {e}")))?;
    for c in &curves {
        c.validate()?;
    }
    Ok(curves)
}

pub fn builtin_curves() -> Vec<CurveSpec> {
    parse_curves(BUILTIN_CURVES).expect("built-in curve table is valid")
}

pub fn load_curves(path: &Path) -> Result<Vec<CurveSpec>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
    parse_curves(&text)
}

/// The curve table named by `MAHLERLAB_CURVES`, or the built-in one.
pub fn configured_curves() -> Result<Vec<CurveSpec>> {
    match std::env::var_os(CURVES_ENV) {
        Some(path) => load_curves(Path::new(&path)),
        None => Ok(builtin_curves()),
    }
}

pub fn find_curve<'a>(curves: &'a [CurveSpec], label: &str) -> Result<&'a CurveSpec> {
    curves
        .iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::Config(format!("unknown curve label {label:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(label: &str) -> CurveSpec {
        find_curve(&builtin_curves(), label).unwrap().clone()
    }

    #[test]
    fn builtin_table_is_valid() {
        let curves = builtin_curves();
        assert_eq!(curves.len(), 6);
        assert_eq!(curve("E_36").discriminant(), -432);
        assert_eq!(curve("E_20").discriminant(), -6400);
    }

    #[test]
    fn unknown_keys_and_bad_records_are_rejected() {
        let extra = r#"[{"label":"x","a1":0,"a2":0,"a3":0,"a4":0,"a6":1,"conductor":36,"root_number":1,"rank":0}]"#;
        assert!(matches!(parse_curves(extra), Err(Error::Config(_))));
        let singular = r#"[{"label":"x","a1":0,"a2":0,"a3":0,"a4":0,"a6":0,"conductor":1,"root_number":1}]"#;
        assert!(parse_curves(singular).is_err());
        let wrong_conductor = r#"[{"label":"x","a1":0,"a2":0,"a3":0,"a4":0,"a6":1,"conductor":30,"root_number":1}]"#;
        assert!(parse_curves(wrong_conductor).is_err());
        assert!(find_curve(&builtin_curves(), "E_99").is_err());
    }

    #[test]
    fn good_prime_examples() {
        let e = curve("E_36");
        assert_eq!(e.ap_good(5), 0);
        assert_eq!(e.ap_good(7), -4);
        assert_eq!(e.affine_count_odd(7), 11);
        assert_eq!(e.brute_force_count(7, false), 11);
    }

    #[test]
    fn table_count_matches_brute_force() {
        for c in builtin_curves() {
            for p in [5u64, 11, 13, 17, 19, 23] {
                if !c.is_bad_prime(p) {
                    assert_eq!(c.affine_count_odd(p), c.brute_force_count(p, false), "{} p={p}", c.label);
                }
            }
        }
    }

    #[test]
    fn bad_prime_traces() {
        // reference traces from the reduction types of these models
        let cases = [
            ("E_36", 2, 0),
            ("E_36", 3, 0),
            ("E_20", 2, 0),
            ("E_20", 5, -1),
            ("E_14", 2, -1),
            ("E_14", 7, 1),
        ];
        for (label, p, want) in cases {
            assert_eq!(curve(label).ap_bad(p).unwrap(), want, "{label} p={p}");
        }
    }

    #[test]
    fn wrong_conductor_trips_the_bad_prime_contract() {
        // 7 is good for E_36 and its trace -4 is out of range for a bad prime
        let mut e = curve("E_36");
        e.conductor = 36 * 7;
        assert!(matches!(e.ap_bad(7), Err(Error::Structural(_))));
    }

    #[test]
    fn coefficient_relations() {
        let e = curve("E_36");
        let a = e.an_coeffs(50).unwrap();
        assert_eq!(a[0], 1);
        assert_eq!(a[5], a[1] * a[2]);
        assert_eq!(a[5], 0);
        let e = curve("E_14");
        let a = e.an_coeffs(200).unwrap();
        // 3 is good for E_14: a_9 = a_3^2 - 3
        assert_eq!(a[8], a[2] * a[2] - 3);
        assert_eq!(a[3], a[1] * a[1]);
        assert_eq!(a[14], a[2] * a[4]);
        assert_eq!(a[47], a[2] * a[15]);
        // 7 is multiplicative: a_49 = a_7^2
        assert_eq!(a[48], a[6] * a[6]);
    }
}
