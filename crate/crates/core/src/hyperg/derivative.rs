//! Closed forms and integral representations of `dg/dk` and `dg̃/dk`.

use std::f64::consts::PI;

use super::radicand::FactoredRadicand;
use super::special::{ellipk_from_complement, hyp2f1_13_23_with_complement};
use crate::error::{Error, Result};

/// Inner quadrature tolerance; the derivative integrals are smooth after
/// the endpoint substitutions, so this is cheap.
const INNER_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeBranch {
    /// `dg/dk` for `k < -1` through the cubic transformation and the AGM.
    S2Neg,
    /// `dg/dk` for `0 < k < 8` as an integral over `[0, 1]`.
    Lemma3Mid,
    /// `dg/dk` for `k > 8` through `₂F₁(⅓,⅔;1; 27k^2/(k+4)^3)`.
    S3Large,
    /// `dg̃/dk` for `k < -1` or `k > 0`.
    Lemma2Tilde,
}

/// A branch together with the open `k`-interval it covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeFormula {
    pub branch: DerivativeBranch,
    pub domain: (f64, f64),
}

impl DerivativeFormula {
    pub const S2_NEG: Self = Self::new(DerivativeBranch::S2Neg, f64::NEG_INFINITY, -1.0);
    pub const LEMMA3_MID: Self = Self::new(DerivativeBranch::Lemma3Mid, 0.0, 8.0);
    pub const S3_LARGE: Self = Self::new(DerivativeBranch::S3Large, 8.0, f64::INFINITY);

    const fn new(branch: DerivativeBranch, lo: f64, hi: f64) -> Self {
        DerivativeFormula { branch, domain: (lo, hi) }
    }

    pub fn contains(&self, k: f64) -> bool {
        match self.branch {
            DerivativeBranch::Lemma2Tilde => !(-1.0..=0.0).contains(&k),
            _ => k > self.domain.0 && k < self.domain.1,
        }
    }

    /// The `dg/dk` branch responsible for `k`.
    pub fn for_g(k: f64) -> Result<Self> {
        [Self::S2_NEG, Self::LEMMA3_MID, Self::S3_LARGE]
            .into_iter()
            .find(|f| f.contains(k))
            .ok_or_else(|| {
                Error::domain("dg_dk", format!("k = {k} outside (-∞,-1) ∪ (0,8) ∪ (8,∞)"))
            })
    }

    /// The `dg̃/dk` formula; its domain is `(-∞,-1) ∪ (0,∞)`.
    pub fn for_g_tilde(k: f64) -> Result<Self> {
        let f = Self::new(DerivativeBranch::Lemma2Tilde, f64::NEG_INFINITY, f64::INFINITY);
        if f.contains(k) {
            Ok(f)
        } else {
            Err(Error::domain("dgt_dk", format!("k = {k} in [-1, 0]")))
        }
    }

    pub fn evaluate(&self, k: f64) -> Result<f64> {
        if !self.contains(k) {
            return Err(Error::domain(
                "DerivativeFormula::evaluate",
                format!("k = {k} outside the domain of {:?}", self.branch),
            ));
        }
        match self.branch {
            DerivativeBranch::S2Neg => s2_neg(k),
            DerivativeBranch::Lemma3Mid => lemma3_mid(k),
            DerivativeBranch::S3Large => s3_large(k),
            DerivativeBranch::Lemma2Tilde => dgt_dk(k),
        }
    }
}

/// `dg/dk` where `g(k) = m(P_{2-k})`.
pub fn dg_dk(k: f64) -> Result<f64> {
    DerivativeFormula::for_g(k)?.evaluate(k)
}

/// `-p(1+p)/(2√(1+2p)) · ₂F₁(½,½;1; p^3(2+p)/(1+2p))` with
/// `p = (√(1-8/k) - 1)/2`, the transformed form of
/// `₂F₁(⅓,⅔;1; 27k/(k-2)^3)/(k-2)`.
fn s2_neg(k: f64) -> Result<f64> {
    let root = (1.0 - 8.0 / k).sqrt();
    let p = (root - 1.0) / 2.0;
    let one_minus_p = 4.0 * (k + 1.0) / (k * (3.0 + root));
    lemma4_closed(p, one_minus_p)
}

fn lemma4_closed(p: f64, one_minus_p: f64) -> Result<f64> {
    let s = 1.0 + 2.0 * p;
    let mc = one_minus_p * (1.0 + p).powi(3) / s;
    Ok(-p * (1.0 + p) / (2.0 * s.sqrt()) * ellipk_from_complement(mc)?)
}

fn lemma3_mid(k: f64) -> Result<f64> {
    // k^2 v^2 + (4-k) k v + 4 = k^2 (v - v0)^2 + k(8-k)/4
    let r = FactoredRadicand::with_vertex(-1.0, vec![0.0, 1.0], k * k, (k - 4.0) / (2.0 * k), k * (8.0 - k) / 4.0);
    Ok(r.positive_part_integral(0.0, 1.0, INNER_TOL)?.value / (2.0 * PI))
}

fn s3_large(k: f64) -> Result<f64> {
    let s = k + 4.0;
    let cube = s * s * s;
    // 1 - w = (k-8)^2 (k+1)/(k+4)^3 vanishes to second order at k = 8
    let gap = k - 8.0;
    Ok(hyp2f1_13_23_with_complement(27.0 * k * k / cube, gap * gap * (k + 1.0) / cube)? / s)
}

/// The integral `-(1/2π) ∫_0^1 p(1+p) dt / √(t(1-t)(1+2p-p^3(2+p)t))`,
/// equal to `dg/dk` at `k = -2/(p(1+p))`.
pub fn dg_dk_lemma4(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("dg_dk_lemma4", format!("p = {p} outside (0, 1)")));
    }
    let c = p.powi(3) * (2.0 + p);
    let r = FactoredRadicand::new(-1.0, vec![0.0, 1.0], Some([0.0, -c, 1.0 + 2.0 * p]));
    let integral = r.positive_part_integral(0.0, 1.0, INNER_TOL)?.value;
    Ok(-p * (1.0 + p) * integral / (2.0 * PI))
}

/// `-(1/π) ∫_{-∞}^{-4/p^2} p(p+1) dv / √(-(v+4)(p^2 v+4)((p+1)^2 v+4))`,
/// the `v`-form of the same quantity as [`dg_dk_lemma4`].
pub fn dg_dk_pform(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("dg_dk_pform", format!("p = {p} outside (0, 1)")));
    }
    let q = p + 1.0;
    let r = FactoredRadicand::new(
        -(p * p * q * q),
        vec![-4.0, -4.0 / (p * p), -4.0 / (q * q)],
        None,
    );
    let top = r.roots()[0];
    let integral = r.positive_part_integral(f64::NEG_INFINITY, top, INNER_TOL)?.value;
    Ok(-p * q * integral / PI)
}

/// Real roots of `v^2 + k(k-4)v + 4k^2`, if any.
fn tilde_quadratic_roots(k: f64) -> Option<(f64, f64)> {
    let disc = (k - 4.0) * (k - 4.0) - 16.0;
    if disc < 0.0 {
        return None;
    }
    let b = 4.0 - k;
    let big = k * (b + b.signum() * disc.sqrt()) / 2.0;
    Some((big, 4.0 * k * k / big))
}

/// `-(v+4)(v^2 + k(k-4)v + 4k^2)` with its real roots split off.
fn tilde_radicand(k: f64) -> FactoredRadicand {
    match tilde_quadratic_roots(k) {
        Some((r1, r2)) => FactoredRadicand::new(-1.0, vec![-4.0, r1, r2], None),
        // minimum k^3 (8-k)/4 at v = -k(k-4)/2
        None => FactoredRadicand::with_vertex(-1.0, vec![-4.0], 1.0, -k * (k - 4.0) / 2.0, k * k * k * (8.0 - k) / 4.0),
    }
}

/// `dg̃/dk = sign(k)/π · Re ∫_{-∞}^{k(3-k)} dv/√(-(v+4)(v^2+k(k-4)v+4k^2))`.
///
/// Only the stretches with a positive radicand contribute.
pub fn dgt_dk(k: f64) -> Result<f64> {
    if !!(-1.0..=0.0).contains(&k) || !k.is_finite() {
        return Err(Error::domain("dgt_dk", format!("k = {k} outside (-∞,-1) ∪ (0,∞)")));
    }
    let integral = tilde_radicand(k)
        .positive_part_integral(f64::NEG_INFINITY, k * (3.0 - k), INNER_TOL)?
        .value;
    Ok(k.signum() * integral / PI)
}

/// The same derivative written over `t ∈ [-1, 1]`:
/// `sign(k)/π · Re ∫ dt/√((1-t)(2t^2+kt+k)(2t+k-2))`.
pub fn dgt_dk_tform(k: f64) -> Result<f64> {
    if !!(-1.0..=0.0).contains(&k) || !k.is_finite() {
        return Err(Error::domain("dgt_dk_tform", format!("k = {k} outside (-∞,-1) ∪ (0,∞)")));
    }
    // (1-t)(2t+k-2) = -2 (t-1)(t-(2-k)/2)
    let linear = vec![1.0, (2.0 - k) / 2.0];
    let disc = k * k - 8.0 * k;
    let r = if disc >= 0.0 {
        let big = (-k - k.signum() * disc.sqrt()) / 4.0;
        let mut roots = linear;
        roots.extend([big, k / (2.0 * big)]);
        FactoredRadicand::new(-4.0, roots, None)
    } else {
        FactoredRadicand::with_vertex(-2.0, linear, 2.0, -k / 4.0, k * (8.0 - k) / 8.0)
    };
    let integral = r.positive_part_integral(-1.0, 1.0, INNER_TOL)?.value;
    Ok(k.signum() * integral / PI)
}

/// `(1/2π) ∫_{-∞}^{-4} dv/√(-(v+4)(v^2+k(k-4)v+4k^2))` for `0 < k < 8`.
pub fn dg_dk_i1(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 8.0) {
        return Err(Error::domain("dg_dk_I1", format!("k = {k} outside (0, 8)")));
    }
    let integral = tilde_radicand(k)
        .positive_part_integral(f64::NEG_INFINITY, -4.0, INNER_TOL)?
        .value;
    Ok(integral / (2.0 * PI))
}

/// `(1/π) ∫_0^1 dt/√(t(1-t)(1-mt))`, a quadrature check on the AGM value
/// of `₂F₁(½,½;1;m)`.
pub fn ellipk_quadrature(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain("ellipk_quadrature", format!("m = {m} outside [0, 1)")));
    }
    let r = FactoredRadicand::new(-1.0, vec![0.0, 1.0], Some([0.0, -m, 1.0]));
    Ok(r.positive_part_integral(0.0, 1.0, INNER_TOL)?.value / PI)
}
