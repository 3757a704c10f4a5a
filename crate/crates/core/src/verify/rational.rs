//! Small-denominator rational recognition by continued fractions.

use serde::Serialize;

/// Largest denominator a guess may have.
pub const MAX_DENOMINATOR: u64 = 64;
/// Largest accepted distance between the ratio and the guess.
pub const RESIDUAL_GATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalGuess {
    pub numerator: i64,
    pub denominator: u64,
    pub residual: f64,
}

impl RationalGuess {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn is(&self, numerator: i64, denominator: u64) -> bool {
        self.numerator == numerator && self.denominator == denominator
    }
}

impl std::fmt::Display for RationalGuess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// The last continued-fraction convergent of `x/y` with denominator at most
/// `max_den` (capped at 64), if it lies within `1e-6` of `x/y`.
pub fn rational_ratio(x: f64, y: f64, max_den: u64) -> Option<RationalGuess> {
    let target = x / y;
    if y == 0.0 || !target.is_finite() || max_den == 0 {
        return None;
    }
    let max_den = max_den.min(MAX_DENOMINATOR) as i128;
    // convergents h/k with the usual two-term recurrences
    let (mut h_prev, mut h) = (1i128, target.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut rest = target - target.floor();
    for _ in 0..64 {
        if rest.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i128;
        let k_next = a * k + k_prev;
        if k_next > max_den {
            break;
        }
        let h_next = a * h + h_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        rest = inv - inv.floor();
    }
    let guess = RationalGuess {
        numerator: h as i64,
        denominator: k as u64,
        residual: (target - h as f64 / k as f64).abs(),
    };
    (guess.residual <= RESIDUAL_GATE).then_some(guess)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_integer() {
        let g = rational_ratio(2.000000031, 1.0, 64).unwrap();
        assert!(g.is(2, 1));
        assert!(g.residual < 1e-7);
    }

    #[test]
    fn simple_fractions() {
        assert!(rational_ratio(1.0, 3.0, 64).unwrap().is(1, 3));
        assert!(rational_ratio(-5.0, 7.0, 64).unwrap().is(-5, 7));
        assert!(rational_ratio(0.5, 1.0, 64).unwrap().is(1, 2));
        assert!(rational_ratio(10.0 + 3e-8, 1.0, 64).unwrap().is(10, 1));
    }

    #[test]
    fn pi_is_not_recognised() {
        assert!(rational_ratio(std::f64::consts::PI, 1.0, 64).is_none());
    }

    #[test]
    fn denominator_cap_applies() {
        assert!(rational_ratio(1.0, 97.0, 64).is_none());
        assert!(rational_ratio(1.0, 97.0, 1000).is_none());
        assert!(rational_ratio(1.0, 0.0, 64).is_none());
    }
}
