//! Real odd characters of conductor 3 and 4, their L-values, and the
//! Hurwitz zeta function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hyperg::special::CompensatedSum;

/// `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Terms summed directly before Euler–Maclaurin takes over.
const HURWITZ_SHIFT: usize = 10;
const DIRECT_TERMS: u64 = 1200;

/// `n ↦ (d/n)` for `d ∈ {-3, -4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    discriminant: i32,
}

impl DirichletChar {
    pub const MINUS_3: DirichletChar = DirichletChar { discriminant: -3 };
    pub const MINUS_4: DirichletChar = DirichletChar { discriminant: -4 };

    pub fn new(discriminant: i32) -> Result<Self> {
        match discriminant {
            -3 | -4 => Ok(DirichletChar { discriminant }),
            _ => Err(Error::domain(
                "DirichletChar",
                format!("discriminant {discriminant} (only -3 and -4 are supported)"),
            )),
        }
    }

    pub fn discriminant(&self) -> i32 {
        self.discriminant
    }

    pub fn conductor(&self) -> u64 {
        self.discriminant.unsigned_abs() as u64
    }

    pub fn value(&self, n: i64) -> i32 {
        let r = n.rem_euclid(self.conductor() as i64);
        match (self.discriminant, r) {
            (_, 1) => 1,
            (-3, 2) | (-4, 3) => -1,
            _ => 0,
        }
    }
}

/// `Σ_{n≥0} (x+n)^{-s}` for `x` large enough that Euler–Maclaurin with ten
/// Bernoulli corrections is at full precision.
fn power_tail(s: f64, x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.add(x.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * x.powf(-s));
    // rising = s(s+1)...(s+2k-2) / (2k)!, xp = x^{-s-2k+1}
    let mut rising = s / 2.0;
    let mut xp = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        acc.add(b * rising * xp);
        let m = 2.0 * (k as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m) / ((m + 1.0) * (m + 2.0));
        xp /= x * x;
    }
    acc.value()
}

/// `ζ(s, a) = Σ_{n≥0} (n+a)^{-s}`, continued to `s < 1` by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain("hurwitz_zeta", format!("a = {a} outside (0, 1]")));
    }
    if s == 1.0 || !s.is_finite() {
        return Err(Error::domain("hurwitz_zeta", format!("s = {s}")));
    }
    let mut acc = CompensatedSum::new();
    for n in 0..HURWITZ_SHIFT {
        acc.add((n as f64 + a).powf(-s));
    }
    acc.add(power_tail(s, HURWITZ_SHIFT as f64 + a));
    Ok(acc.value())
}

/// `L(χ, s)` for `s > 1`: a direct sum, then each residue class's tail by
/// Euler–Maclaurin.
pub fn dirichlet_l(chi: DirichletChar, s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain("dirichlet_L", format!("s = {s} must exceed 1")));
    }
    let f = chi.conductor();
    let m = DIRECT_TERMS / f * f;
    let mut acc = CompensatedSum::new();
    for n in 1..=m {
        let c = chi.value(n as i64);
        if c != 0 {
            acc.add(f64::from(c) * (n as f64).powf(-s));
        }
    }
    // Σ_{j ≥ m/f} (f j + r)^{-s} = f^{-s} Σ_{j ≥ 0} (m/f + r/f + j)^{-s}
    let ff = f as f64;
    for r in 1..f {
        let c = chi.value(r as i64);
        if c != 0 {
            let start = (m / f) as f64 + r as f64 / ff;
            acc.add(f64::from(c) * ff.powf(-s) * power_tail(s, start));
        }
    }
    Ok(acc.value())
}

/// `L(χ, s) = f^{-s} Σ_{r=1}^{f} χ(r) ζ(s, r/f)`, valid for every `s ≠ 1`.
pub fn dirichlet_l_hurwitz(chi: DirichletChar, s: f64) -> Result<f64> {
    let f = chi.conductor();
    let ff = f as f64;
    let mut acc = CompensatedSum::new();
    for r in 1..=f {
        let c = chi.value(r as i64);
        if c != 0 {
            acc.add(f64::from(c) * hurwitz_zeta(s, r as f64 / ff)?);
        }
    }
    Ok(ff.powf(-s) * acc.value())
}

/// `L'(χ, -1) = f^{3/2} L(χ, 2) / (4π)` for the odd characters of
/// conductor `f ∈ {3, 4}`.
pub fn lprime_chi_minus1(chi: DirichletChar) -> Result<f64> {
    let f = chi.conductor() as f64;
    Ok(f.powf(1.5) / (4.0 * PI) * dirichlet_l(chi, 2.0)?)
}

/// Central difference of `L(χ, s)` at `s = -1` with step `h`, through the
/// Hurwitz representation.
pub fn lprime_chi_minus1_difference(chi: DirichletChar, h: f64) -> Result<f64> {
    let up = dirichlet_l_hurwitz(chi, -1.0 + h)?;
    let down = dirichlet_l_hurwitz(chi, -1.0 - h)?;
    Ok((up - down) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b} (diff {:e})", (a - b).abs());
    }

    const CATALAN: f64 = 0.915_965_594_177_219;

    #[test]
    fn character_values() {
        for chi in [DirichletChar::MINUS_3, DirichletChar::MINUS_4] {
            let f = chi.conductor() as i64;
            assert_eq!(chi.value(-1), -1);
            for n in 0..40 {
                assert_eq!(chi.value(n), chi.value(n + f));
                let coprime = (1..=n.max(1)).all(|d| !(n % d == 0 && f % d == 0) || d == 1);
                assert_eq!(chi.value(n) == 0, !coprime || n == 0, "n={n}");
            }
        }
        assert!(DirichletChar::new(-7).is_err());
        assert_eq!(DirichletChar::new(-4).unwrap(), DirichletChar::MINUS_4);
    }

    #[test]
    fn hurwitz_examples() {
        close(hurwitz_zeta(2.0, 1.0).unwrap(), PI * PI / 6.0, 1e-14);
        close(hurwitz_zeta(-1.0, 1.0).unwrap(), -1.0 / 12.0, 1e-14);
        // high-precision reference: ζ(2, 1/2) = π^2/2
        close(hurwitz_zeta(2.0, 0.5).unwrap(), 4.934_802_200_544_679, 1e-13);
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }

    #[test]
    fn hurwitz_duplication() {
        // ζ(s, 1/2) + ζ(s, 1) = 2^s ζ(s, 1)
        for s in [-2.0, -1.5, -1.0, -0.5, 0.5, 2.0, 3.0] {
            let lhs = hurwitz_zeta(s, 0.5).unwrap() + hurwitz_zeta(s, 1.0).unwrap();
            let rhs = 2f64.powf(s) * hurwitz_zeta(s, 1.0).unwrap();
            close(lhs, rhs, 1e-12);
        }
    }

    #[test]
    fn l_values_at_two() {
        close(dirichlet_l(DirichletChar::MINUS_4, 2.0).unwrap(), CATALAN, 1e-15);
        // Catalan's constant by its alternating series with paired terms
        let mut alt = 0.0;
        for k in (0..200_000).rev() {
            let n = 4.0 * k as f64;
            alt += 1.0 / ((n + 1.0) * (n + 1.0)) - 1.0 / ((n + 3.0) * (n + 3.0));
        }
        close(alt, CATALAN, 1e-10);
        close(dirichlet_l(DirichletChar::MINUS_3, 2.0).unwrap(), 0.781_302_412_896_486_3, 1e-14);
        for chi in [DirichletChar::MINUS_3, DirichletChar::MINUS_4] {
            close(
                dirichlet_l(chi, 2.0).unwrap(),
                dirichlet_l_hurwitz(chi, 2.0).unwrap(),
                1e-13,
            );
            // truncation after N terms is off by at most Σ_{n>N} n^{-10}
            let partial = |n_max: i64| -> f64 {
                (1..=n_max).map(|n| f64::from(chi.value(n)) * (n as f64).powi(-10)).sum()
            };
            let tail = |n_max: i64| -> f64 { (n_max + 1..10_000).map(|n| (n as f64).powi(-10)).sum() };
            let l10 = dirichlet_l(chi, 10.0).unwrap();
            assert!((l10 - partial(3)).abs() <= tail(3));
            close(l10, partial(30), 1e-14);
        }
        assert!(dirichlet_l(DirichletChar::MINUS_3, 1.0).is_err());
    }

    #[test]
    fn derivative_at_minus_one() {
        // high-precision references
        close(lprime_chi_minus1(DirichletChar::MINUS_3).unwrap(), 0.323_065_947_219_450_5, 1e-14);
        close(lprime_chi_minus1(DirichletChar::MINUS_4).unwrap(), 2.0 * CATALAN / PI, 1e-14);
        for chi in [DirichletChar::MINUS_3, DirichletChar::MINUS_4] {
            let closed = lprime_chi_minus1(chi).unwrap();
            let diff = lprime_chi_minus1_difference(chi, 1e-4).unwrap();
            close(closed, diff, 1e-7);
            // trivial zero at s = -1 for odd characters
            close(dirichlet_l_hurwitz(chi, -1.0).unwrap(), 0.0, 1e-13);
        }
    }
}
