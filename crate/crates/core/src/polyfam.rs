//! Polynomial families and the circle functions of Bosman's family.
//!
//! Every family is affine in its parameter `k`: a fixed integer template plus
//! `k` times a second integer template. Construction therefore costs one
//! multiplication per coefficient and is exact in `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// Sparse real polynomial in two variables, `Σ c_{ij} x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), f64>,
    degree_y: u32,
}

impl BivariatePolynomial {
    /// Builds a polynomial from `(i, j, coefficient)` triples. Repeated
    /// exponents are summed; zero coefficients are dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut map = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i, j)).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        let degree_y = map.keys().map(|&(_, j)| j).max().unwrap_or(0);
        BivariatePolynomial {
            terms: map,
            degree_y,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([(0, 0, c)])
    }

    pub fn degree_y(&self) -> u32 {
        self.degree_y
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^i y^j` (zero when absent).
    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Coefficients of `y^j` as polynomials in `x`, each listed by ascending
    /// power of `x`.
    pub fn y_coefficient_polys(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); self.degree_y as usize + 1];
        for (&(i, j), &c) in &self.terms {
            let row = &mut out[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, 0.0);
            }
            row[i as usize] = c;
        }
        out
    }

    /// Values of the `y^j` coefficients at `x`, index `j`.
    pub fn y_coefficients_at(&self, x: Complex64) -> Vec<Complex64> {
        self.y_coefficient_polys()
            .iter()
            .map(|row| horner(row, x))
            .collect()
    }

    /// The same polynomial with `x` and `y` exchanged.
    pub fn swap_xy(&self) -> Self {
        Self::from_terms(self.terms().map(|((i, j), c)| (j, i, c)))
    }

    /// Coefficient-wise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &other.terms {
                out.push((i1 + i2, j1 + j2, c1 * c2));
            }
        }
        Self::from_terms(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms().map(|((i, j), c)| (i, j, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()).map(|((i, j), c)| (i, j, c)))
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*y")?,
                _ => write!(f, "*y^{j}")?,
            }
        }
        Ok(())
    }
}

fn horner(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Evaluates `p(x, y)` by nested Horner schemes (in `x` for each
/// `y`-coefficient, then in `y`).
pub fn eval(p: &BivariatePolynomial, x: Complex64, y: Complex64) -> Complex64 {
    p.y_coefficients_at(x)
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * y + c)
}

/// The five parameterised families handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Boyd's elliptic family `P_k`.
    BoydP,
    /// Bosman's genus-2 family `Q_k`.
    BosmanQ,
    T3P,
    T3Q,
    T3R,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::BoydP,
        Family::BosmanQ,
        Family::T3P,
        Family::T3Q,
        Family::T3R,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BoydP => "boydP",
            Family::BosmanQ => "bosmanQ",
            Family::T3P => "t3P",
            Family::T3Q => "t3Q",
            Family::T3R => "t3R",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    fn template(self) -> FamilyTemplate {
        match self {
            Family::BoydP => BOYD_P,
            Family::BosmanQ => BOSMAN_Q,
            Family::T3P => T3_P,
            Family::T3Q => T3_Q,
            Family::T3R => T3_R,
        }
    }

    pub fn polynomial(self, k: f64) -> BivariatePolynomial {
        self.template().build(k)
    }

    /// Whether `k` is one of the listed degenerate members of the family.
    pub fn is_degenerate(self, k: f64) -> bool {
        let list: &[f64] = match self {
            Family::BosmanQ => &[-1.0, 0.0, 4.0, 8.0],
            Family::T3R => &[0.0, 3.0, -3.0],
            _ => &[],
        };
        list.contains(&k)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A member of one of the families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub family: Family,
    pub k: f64,
    pub degenerate: bool,
}

impl FamilyPoint {
    pub fn new(family: Family, k: f64) -> Self {
        FamilyPoint {
            family,
            k,
            degenerate: family.is_degenerate(k),
        }
    }

    pub fn polynomial(&self) -> BivariatePolynomial {
        self.family.polynomial(self.k)
    }
}

/// `constant + k * linear`, both given as `(i, j, c)` with integer `c`.
#[derive(Clone, Copy)]
struct FamilyTemplate {
    constant: &'static [(u32, u32, i64)],
    linear: &'static [(u32, u32, i64)],
}

impl FamilyTemplate {
    fn build(self, k: f64) -> BivariatePolynomial {
        let fixed = self.constant.iter().map(|&(i, j, c)| (i, j, c as f64));
        let scaled = self.linear.iter().map(|&(i, j, c)| (i, j, k * c as f64));
        BivariatePolynomial::from_terms(fixed.chain(scaled))
    }
}

// (x+1)y^2 + (x^2+kx+1)y + (x^2+x)
const BOYD_P: FamilyTemplate = FamilyTemplate {
    constant: &[(0, 2, 1), (1, 2, 1), (2, 1, 1), (0, 1, 1), (2, 0, 1), (1, 0, 1)],
    linear: &[(1, 1, 1)],
};

// Y^2 + (X^4+kX^3+2kX^2+kX+1)Y + X^4
const BOSMAN_Q: FamilyTemplate = FamilyTemplate {
    constant: &[(0, 2, 1), (4, 1, 1), (0, 1, 1), (4, 0, 1)],
    linear: &[(3, 1, 1), (2, 1, 2), (1, 1, 1)],
};

// X^2 * Q~_k(X, Y) = X^2 Y^2 + (X^4+kX^3+2kX^2+kX+1)Y + X^2
const BOSMAN_Q_TILDE: FamilyTemplate = FamilyTemplate {
    constant: &[(2, 2, 1), (4, 1, 1), (0, 1, 1), (2, 0, 1)],
    linear: &[(3, 1, 1), (2, 1, 2), (1, 1, 1)],
};

// (x^2+x+1)y^2 + kx(x+1)y + x(x^2+x+1)
const T3_P: FamilyTemplate = FamilyTemplate {
    constant: &[(2, 2, 1), (1, 2, 1), (0, 2, 1), (3, 0, 1), (2, 0, 1), (1, 0, 1)],
    linear: &[(2, 1, 1), (1, 1, 1)],
};

// (x^2+x+1)y^2 + (x^4+kx^3+(2k-4)x^2+kx+1)y + x^2(x^2+x+1)
const T3_Q: FamilyTemplate = FamilyTemplate {
    constant: &[
        (2, 2, 1),
        (1, 2, 1),
        (0, 2, 1),
        (4, 1, 1),
        (2, 1, -4),
        (0, 1, 1),
        (4, 0, 1),
        (3, 0, 1),
        (2, 0, 1),
    ],
    linear: &[(3, 1, 1), (2, 1, 2), (1, 1, 1)],
};

// y^3 - y + x^3 - x + kxy
const T3_R: FamilyTemplate = FamilyTemplate {
    constant: &[(0, 3, 1), (0, 1, -1), (3, 0, 1), (1, 0, -1)],
    linear: &[(1, 1, 1)],
};

pub fn boyd_p(k: f64) -> BivariatePolynomial {
    BOYD_P.build(k)
}

pub fn bosman_q(k: f64) -> BivariatePolynomial {
    BOSMAN_Q.build(k)
}

/// `X^2 · Q̃_k(X, Y)`: the Laurent polynomial `Y^2 + B_k(X) Y + 1` cleared
/// of denominators. Same Mahler measure as `Q_k`.
pub fn bosman_q_tilde(k: f64) -> BivariatePolynomial {
    BOSMAN_Q_TILDE.build(k)
}

/// `Q̃_k(X, Y) = Y^2 + B_k(X) Y + 1` as a Laurent polynomial in `X`.
pub fn q_tilde_eval(k: f64, x: Complex64, y: Complex64) -> Complex64 {
    let s = x + x.inv();
    let b = s * s + s * k + (2.0 * k - 2.0);
    y * y + b * y + 1.0
}

pub fn thm3_p(k: f64) -> BivariatePolynomial {
    T3_P.build(k)
}

pub fn thm3_q(k: f64) -> BivariatePolynomial {
    T3_Q.build(k)
}

pub fn thm3_r(k: f64) -> BivariatePolynomial {
    T3_R.build(k)
}

/// `B_k(e^{iθ}) = (2cosθ)^2 + k(2cosθ) + 2k - 2`.
pub fn b_of(k: f64, theta: f64) -> f64 {
    let s = 2.0 * theta.cos();
    s * s + k * s + 2.0 * k - 2.0
}

/// `Δ_k(e^{iθ})` from its factorisation
/// `(s^2 + ks + 2k)(s + 2)(s + k - 2)` with `s = 2cosθ`.
///
/// Near `θ = π` the factor `s + 2` is evaluated as `4cos^2(θ/2)` so that the
/// zero is resolved without cancellation.
pub fn delta_of(k: f64, theta: f64) -> f64 {
    let s = 2.0 * theta.cos();
    let half = (0.5 * theta).cos();
    let s_plus_2 = 4.0 * half * half;
    (s * s + k * s + 2.0 * k) * s_plus_2 * (s + k - 2.0)
}

/// `Δ_k` through the expanded route `B^2 - 4`.
pub fn delta_expanded(k: f64, theta: f64) -> f64 {
    let b = b_of(k, theta);
    b * b - 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn boyd_p_at_two_is_the_product() {
        let lhs = boyd_p(2.0);
        let x1 = BivariatePolynomial::from_terms([(1, 0, 1.0), (0, 0, 1.0)]);
        let y1 = BivariatePolynomial::from_terms([(0, 1, 1.0), (0, 0, 1.0)]);
        let xy = BivariatePolynomial::from_terms([(1, 0, 1.0), (0, 1, 1.0)]);
        assert_eq!(lhs, x1.mul(&y1).mul(&xy));
    }

    #[test]
    fn boyd_p_factored_form_for_any_k() {
        for k in [-7.5, -2.0, 0.0, 1.0, 3.25, 10.0] {
            let x1 = BivariatePolynomial::from_terms([(1, 0, 1.0), (0, 0, 1.0)]);
            let y1 = BivariatePolynomial::from_terms([(0, 1, 1.0), (0, 0, 1.0)]);
            let xy = BivariatePolynomial::from_terms([(1, 0, 1.0), (0, 1, 1.0)]);
            let cross = BivariatePolynomial::from_terms([(1, 1, -(2.0 - k))]);
            assert_eq!(boyd_p(k), x1.mul(&y1).mul(&xy).add(&cross), "k = {k}");
        }
    }

    #[test]
    fn simple_evaluations() {
        assert_eq!(eval(&boyd_p(0.0), c(1.0, 0.0), c(1.0, 0.0)), c(6.0, 0.0));
        // Y^2 + (X^4 + 1)Y + X^4 at X = Y = 1
        assert_eq!(eval(&bosman_q(0.0), c(1.0, 0.0), c(1.0, 0.0)), c(4.0, 0.0));
        for k in [-3.0, 0.5, 2.0] {
            assert_eq!(boyd_p(k).coeff(1, 1), k);
            assert_eq!(bosman_q(k).coeff(2, 1), 2.0 * k);
            let q = eval(&thm3_q(k), c(1.0, 0.0), c(1.0, 0.0));
            assert!((q - c(4.0 * k + 4.0, 0.0)).norm() < 1e-12);
        }
        let p = BivariatePolynomial::constant(-2.5);
        assert_eq!(eval(&p, c(0.3, -4.0), c(7.0, 1.0)), c(-2.5, 0.0));
    }

    #[test]
    fn boyd_p2_vanishes_on_x_minus_one() {
        let p = boyd_p(2.0);
        for y in [c(0.3, 0.2), c(-4.0, 1.0), c(1.0, 0.0)] {
            assert_eq!(eval(&p, c(-1.0, 0.0), y).norm(), 0.0);
        }
    }

    #[test]
    fn bosman_q_eval_matches_hand_expansion() {
        // Q_2(i, 1): the Y-coefficient is i^4 + 2i^3 + 4i^2 + 2i + 1 = -2,
        // so Q = 1 - 2 + i^4 = 0.
        let x = c(0.0, 1.0);
        let by_hand = {
            let b = x.powi(4) + x.powi(3) * 2.0 + x.powi(2) * 4.0 + x * 2.0 + 1.0;
            1.0 + b + x.powi(4)
        };
        let got = eval(&bosman_q(2.0), x, c(1.0, 0.0));
        assert!((got - by_hand).norm() < 1e-13);
        assert!(got.norm() < 1e-13);
    }

    #[test]
    fn bosman_discriminant_at_one() {
        // Y-discriminant of Q_8 at X = 1: (4k+2)^2 - 4 = 1152.
        let cs = bosman_q(8.0).y_coefficients_at(c(1.0, 0.0));
        let disc = cs[1] * cs[1] - cs[2] * cs[0] * 4.0;
        assert_eq!(cs[1], c(34.0, 0.0));
        assert_eq!(disc, c(1152.0, 0.0));
    }

    #[test]
    fn thm3_shapes() {
        let r = thm3_r(2.5);
        assert_eq!(r.coeff(0, 3), 1.0);
        assert_eq!(r.degree_y(), 3);
        assert_eq!(r.swap_xy(), r);
        assert_eq!(thm3_p(1.0).degree_y(), 2);
        assert_eq!(thm3_q(1.0).coeff(2, 1), -2.0);
    }

    #[test]
    fn b_and_delta_examples() {
        for k in [-3.0, 0.0, 1.0, 7.0] {
            assert!((b_of(k, PI / 2.0) - (2.0 * k - 2.0)).abs() < 1e-14);
        }
        assert_eq!(b_of(2.0, 0.0), 10.0);
        // s = -2, k = -2: 4 + 4 - 4 - 2 = 2
        assert!((b_of(-2.0, PI) - 2.0).abs() < 1e-14);
        assert_eq!(delta_of(2.0, 0.0), 96.0);
        for k in [-5.0, 1.0, 9.0] {
            assert!(delta_of(k, PI).abs() < 1e-30);
        }
    }

    #[test]
    fn delta_zero_parameter_is_nonpositive() {
        for i in 0..=2000 {
            let theta = PI * i as f64 / 2000.0;
            assert!(delta_of(0.0, theta) <= 0.0);
        }
    }

    #[test]
    fn degeneracy_flags() {
        assert!(FamilyPoint::new(Family::BosmanQ, 8.0).degenerate);
        assert!(FamilyPoint::new(Family::BosmanQ, -1.0).degenerate);
        assert!(!FamilyPoint::new(Family::BosmanQ, 2.0).degenerate);
        assert!(FamilyPoint::new(Family::T3R, -3.0).degenerate);
        assert!(!FamilyPoint::new(Family::T3R, 4.0).degenerate);
        assert!(!FamilyPoint::new(Family::BoydP, 0.0).degenerate);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
        assert_eq!(Family::from_name("nope"), None);
    }
}
