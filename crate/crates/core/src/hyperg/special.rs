//! `₂F₁` on the real line and complete elliptic integrals through the AGM.

use crate::error::{Error, Result};

const TAIL_REL: f64 = 1e-17;
const TERM_CAP: usize = 100_000;
/// Beyond this argument the direct series is replaced by a transformation.
pub const SERIES_LIMIT: f64 = 0.95;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Direct Gauss series `Σ (a)_n (b)_n / ((c)_n n!) w^n`, stopped once two
/// consecutive terms fall below `1e-17` of the partial sum.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if w.abs() >= 1.0 {
        return Err(Error::domain("hyp2f1_series", format!("|w| = {} ≥ 1", w.abs())));
    }
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    let mut small = 0;
    for n in 0..TERM_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * w;
        acc.add(term);
        if term.abs() < TAIL_REL * acc.value().abs() {
            small += 1;
            if small == 2 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
        if term == 0.0 {
            return Ok(acc.value());
        }
    }
    Err(Error::non_convergence(
        "hyp2f1_series",
        format!("no convergence in {TERM_CAP} terms at w = {w}"),
    ))
}

/// Arithmetic–geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `₂F₁(½,½;1;m) = (2/π) K(√m)` given the complementary parameter `1 - m`.
pub fn ellipk_from_complement(mc: f64) -> Result<f64> {
    if !(mc > 0.0) || mc > 1.0 {
        return Err(Error::domain(
            "ellipk_agm",
            format!("complementary parameter {mc} outside (0, 1]"),
        ));
    }
    Ok(1.0 / agm(1.0, mc.sqrt()))
}

/// `₂F₁(½,½;1;m)` for `0 ≤ m < 1` as `1/AGM(1, √(1-m))`.
pub fn ellipk_agm(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain("ellipk_agm", format!("m = {m} outside [0, 1)")));
    }
    ellipk_from_complement(1.0 - m)
}

/// Parameter `p ∈ [0, 1)` of Ramanujan's cubic transformation: the solution
/// of `27 p^2 (1+p)^2 / (4 (1+p+p^2)^3) = w`.
///
/// Returns `(p, 1 - p)`; the complement is computed without cancellation.
/// Works through `u = p(1+p)` and `d = 2 - u`, for which
/// `1 - w = d^2 (9 - 4d) / (4 (3 - d)^3)` is increasing in `d ∈ [0, 2]`.
pub fn ramanujan_parameter(w: f64) -> Result<(f64, f64)> {
    ramanujan_parameter_from_complement(1.0 - w)
}

/// [`ramanujan_parameter`] given `1 - w` directly, which keeps full relative
/// accuracy as `w → 1`.
pub fn ramanujan_parameter_from_complement(target: f64) -> Result<(f64, f64)> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::domain(
            "ramanujan_parameter",
            format!("1 - w = {target} outside (0, 1]"),
        ));
    }
    let gap = |d: f64| d * d * (9.0 - 4.0 * d) / (4.0 * (3.0 - d).powi(3)) - target;
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d = 0.5 * (lo + hi);
    let u = 2.0 - d;
    let root = (1.0 + 4.0 * u).sqrt();
    let p = (root - 1.0) / 2.0;
    let one_minus_p = 2.0 * d / (3.0 + root);
    Ok((p, one_minus_p))
}

/// Right-hand side of Ramanujan's transformation,
/// `(1+p+p^2)/√(1+2p) · ₂F₁(½,½;1; p^3(2+p)/(1+2p))`, with the AGM doing
/// the `₂F₁(½,½;1;·)` part.
pub fn ramanujan_rhs(p: f64, one_minus_p: f64) -> Result<f64> {
    let s = 1.0 + 2.0 * p;
    // 1 - p^3(2+p)/(1+2p) = (1-p)(1+p)^3/(1+2p)
    let mc = one_minus_p * (1.0 + p).powi(3) / s;
    Ok((1.0 + p + p * p) / s.sqrt() * ellipk_from_complement(mc)?)
}

/// `₂F₁(⅓,⅔;1;w)` for real `w < 1`.
///
/// `|w| ≤ 0.95` uses the series. `w > 0.95` goes through Ramanujan's cubic
/// transformation to `₂F₁(½,½;1;·)` and the AGM. `w < -0.95` uses the Pfaff
/// transformation to `₂F₁(⅓,⅓;1; w/(w-1))`.
pub fn hyp2f1_13_23(w: f64) -> Result<f64> {
    hyp2f1_13_23_with_complement(w, 1.0 - w)
}

/// [`hyp2f1_13_23`] with `1 - w` supplied by the caller. Near the
/// logarithmic singularity at `w = 1` the complement carries all the
/// information, so it should be computed without cancellation.
pub fn hyp2f1_13_23_with_complement(w: f64, one_minus_w: f64) -> Result<f64> {
    const A: f64 = 1.0 / 3.0;
    const B: f64 = 2.0 / 3.0;
    if w.is_nan() || !(one_minus_w > 0.0) {
        return Err(Error::domain("hyp2f1_13_23", format!("w = {w} ≥ 1")));
    }
    if w.abs() <= SERIES_LIMIT {
        return hyp2f1_series(A, B, 1.0, w);
    }
    if w > 0.0 {
        let (p, q) = ramanujan_parameter_from_complement(one_minus_w)?;
        return ramanujan_rhs(p, q);
    }
    let z = w / (w - 1.0);
    Ok((1.0 - w).powf(-A) * hyp2f1_series(A, A, 1.0, z)?)
}
