//! Adaptive one-dimensional quadrature.
//!
//! The interval is cut at the caller's breakpoints into panels. Each panel
//! `[lo, hi]` is reparameterised by the cubic map
//! `t = lo + (hi - lo)(3u^2 - 2u^3)`, whose derivative vanishes at both ends.
//! An inverse square-root or logarithmic singularity sitting on a panel end
//! becomes bounded (or smooth) in `u`, and the integrand is never sampled at
//! the panel ends themselves. Within `u` space the integral is refined by
//! bisection with a 15-point Kronrod / 7-point Gauss pair, always splitting
//! the segment with the largest error estimate first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default evaluation budget for a single integral.
pub const DEFAULT_MAX_EVALS: usize = 2_000_000;
/// Default number of scan intervals for breakpoint searches.
pub const DEFAULT_SCAN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Multiplies value and error estimate by `s`.
    pub fn scaled(self, s: f64) -> Self {
        QuadratureResult {
            value: self.value * s,
            error_estimate: self.error_estimate * s.abs(),
            ..self
        }
    }

    /// Sum of two independent integrals.
    pub fn combine(self, other: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    /// Zero integral over an empty set; used as the identity for `combine`.
    pub fn empty() -> Self {
        QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
}

/// Sorted, strictly increasing interior points of an integration interval.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Breakpoints {
    points: Vec<f64>,
}

impl Breakpoints {
    pub fn none() -> Self {
        Breakpoints::default()
    }

    /// Keeps the points strictly inside `(a, b)`, sorted and deduplicated.
    pub fn within<I: IntoIterator<Item = f64>>(a: f64, b: f64, points: I) -> Self {
        let mut pts: Vec<f64> = points
            .into_iter()
            .filter(|p| p.is_finite() && *p > a && *p < b)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Breakpoints { points: pts }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Union with another set, restricted to `(a, b)`.
    pub fn merged(&self, other: &Breakpoints, a: f64, b: f64) -> Self {
        Breakpoints::within(a, b, self.points.iter().chain(&other.points).copied())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: DEFAULT_TOL,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig {
            tol,
            ..Default::default()
        }
    }
}

// Kronrod abscissae (non-negative half) and weights; odd indices are the
// 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    lo: f64,
    hi: f64,
    lo_in: f64,
    hi_in: f64,
}

impl Panel {
    fn new(lo: f64, hi: f64) -> Self {
        Panel {
            lo,
            hi,
            lo_in: lo.next_up(),
            hi_in: hi.next_down(),
        }
    }

    /// Point and Jacobian for `u ∈ (0, 1)`.
    fn map(&self, u: f64) -> (f64, f64) {
        let len = self.hi - self.lo;
        let t = if u <= 0.5 {
            self.lo + len * u * u * (3.0 - 2.0 * u)
        } else {
            let s = 1.0 - u;
            self.hi - len * s * s * (3.0 - 2.0 * s)
        };
        let t = t.clamp(self.lo_in, self.hi_in);
        (t, 6.0 * len * u * (1.0 - u))
    }
}

#[derive(Clone, Copy)]
struct Segment {
    panel: usize,
    u0: f64,
    u1: f64,
    value: f64,
    error: f64,
    roundoff: f64,
    frozen: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.panel.cmp(&self.panel))
            .then_with(|| other.u0.total_cmp(&self.u0))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: &F,
    panel: &Panel,
    idx: usize,
    u0: f64,
    u1: f64,
) -> Result<Segment> {
    let center = 0.5 * (u0 + u1);
    let half = 0.5 * (u1 - u0);
    let sample = |u: f64| -> Result<f64> {
        let (t, jac) = panel.map(u);
        if jac == 0.0 {
            return Ok(0.0);
        }
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: t });
        }
        Ok(v * jac)
    };
    let fc = sample(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half;
    let (t0, _) = panel.map(u0.max(f64::MIN_POSITIVE));
    let (t1, _) = panel.map(u1.min(1.0 - f64::EPSILON));
    let too_narrow = (u1 - u0) < 1e-13 || (t1 - t0).abs() <= 8.0 * f64::EPSILON * t0.abs().max(t1.abs());
    Ok(Segment {
        panel: idx,
        u0,
        u1,
        value,
        error,
        roundoff,
        frozen: error <= roundoff || too_narrow,
    })
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, cutting first
/// at `breakpoints`.
///
/// Running out of budget yields `converged = false`; a non-finite integrand
/// value is reported as an error.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    breakpoints: &Breakpoints,
) -> Result<QuadratureResult> {
    integrate_with(f, a, b, breakpoints, &QuadConfig::with_tol(tol))
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &Breakpoints,
    config: &QuadConfig,
) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(
            "integrate_adaptive",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    let mut edges = vec![a];
    edges.extend(
        breakpoints
            .points()
            .iter()
            .copied()
            .filter(|&p| p > a && p < b),
    );
    edges.push(b);
    let panels: Vec<Panel> = edges.windows(2).map(|w| Panel::new(w[0], w[1])).collect();

    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    for (idx, panel) in panels.iter().enumerate() {
        let seg = gauss_kronrod(&f, panel, idx, 0.0, 1.0)?;
        evals += 15;
        if seg.frozen {
            done.push(seg);
        } else {
            heap.push(seg);
        }
    }

    let totals = |heap: &BinaryHeap<Segment>, done: &[Segment]| -> (f64, f64) {
        heap.iter()
            .chain(done)
            .fold((0.0, 0.0), |(e, r), s| (e + s.error, r + s.roundoff))
    };

    // a tolerance below the rounding floor of the sum counts as met at the floor
    let (mut error, mut floor) = totals(&heap, &done);
    let mut refinements = 0usize;
    while error > config.tol.max(floor) {
        let Some(seg) = heap.pop() else { break };
        if evals + 30 > config.max_evals {
            heap.push(seg);
            break;
        }
        let mid = 0.5 * (seg.u0 + seg.u1);
        let panel = &panels[seg.panel];
        let left = gauss_kronrod(&f, panel, seg.panel, seg.u0, mid)?;
        let right = gauss_kronrod(&f, panel, seg.panel, mid, seg.u1)?;
        evals += 30;
        error += left.error + right.error - seg.error;
        floor += left.roundoff + right.roundoff - seg.roundoff;
        for s in [left, right] {
            if s.frozen {
                done.push(s);
            } else {
                heap.push(s);
            }
        }
        refinements += 1;
        // The running sums drift under cancellation; resynchronise now and then.
        if refinements.is_multiple_of(256) {
            (error, floor) = totals(&heap, &done);
        }
    }

    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(done);
    all.sort_by(|x, y| x.panel.cmp(&y.panel).then(x.u0.total_cmp(&y.u0)));
    let (value, comp) = all.iter().fold((0.0f64, 0.0f64), |(s, c), seg| {
        let t = s + seg.value;
        let c = if s.abs() >= seg.value.abs() {
            c + ((s - t) + seg.value)
        } else {
            c + ((seg.value - t) + s)
        };
        (t, c)
    });
    let error_estimate: f64 = all.iter().map(|s| s.error).sum();
    let floor: f64 = all.iter().map(|s| s.roundoff).sum();
    Ok(QuadratureResult {
        value: value + comp,
        error_estimate,
        evaluations: evals,
        converged: error_estimate <= config.tol.max(floor),
    })
}

/// Integrates `f` over `(-∞, upper]` through `v = upper - (1 - u)/u`.
///
/// Breakpoints are given in `v` and mapped to `u`.
pub fn integrate_to_upper<F: Fn(f64) -> f64>(
    f: F,
    upper: f64,
    tol: f64,
    breakpoints: &Breakpoints,
) -> Result<QuadratureResult> {
    let mapped = Breakpoints::within(
        0.0,
        1.0,
        breakpoints
            .points()
            .iter()
            .filter(|&&v| v < upper)
            .map(|&v| 1.0 / (1.0 + upper - v)),
    );
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let v = upper - (1.0 - u) / u;
        let jac = 1.0 / (u * u);
        if !v.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        f(v) * jac
    };
    integrate_adaptive(g, 0.0, 1.0, tol, &mapped)
}

/// Returns `value` as zero when it lies in `[-1e-13, 0)`, then takes the
/// square root. Values further below zero give NaN.
pub fn clamped_sqrt(value: f64) -> f64 {
    if (-1e-13..0.0).contains(&value) {
        0.0
    } else {
        value.sqrt()
    }
}

const BISECTION_WIDTH: f64 = 1e-13;

/// Locates sign changes of `f` on `[a, b]` from `n_scan + 1` equispaced
/// samples, refining each bracket by bisection to width `1e-13`.
///
/// Zeros where `f` touches zero without changing sign are not reported.
/// A sample that is exactly zero between samples of opposite sign is taken
/// as the root.
pub fn find_sign_changes<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n_scan: usize) -> Breakpoints {
    assert!(n_scan >= 2, "n_scan must be at least 2");
    let step = (b - a) / n_scan as f64;
    let xs: Vec<f64> = (0..=n_scan)
        .map(|i| if i == n_scan { b } else { a + step * i as f64 })
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut roots = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..xs.len() {
        let v = vals[i];
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some(j) = last {
            if vals[j].signum() != v.signum() {
                if i == j + 1 {
                    roots.push(bisect_sign(&f, xs[j], xs[i], vals[j]));
                } else {
                    // exact zeros in between
                    roots.push(xs[(i + j) / 2]);
                }
            }
        }
        last = Some(i);
    }
    Breakpoints::within(a, b, roots)
}

fn bisect_sign<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let s_lo = f_lo.signum();
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the points where an integer-valued step function changes value,
/// scanning `n_scan + 1` samples and bisecting each change to width `1e-13`.
pub fn find_level_changes<F: Fn(f64) -> i64>(f: F, a: f64, b: f64, n_scan: usize) -> Breakpoints {
    assert!(n_scan >= 2, "n_scan must be at least 2");
    let step = (b - a) / n_scan as f64;
    let xs: Vec<f64> = (0..=n_scan)
        .map(|i| if i == n_scan { b } else { a + step * i as f64 })
        .collect();
    let vals: Vec<i64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..n_scan {
        if vals[i] != vals[i + 1] {
            let (mut lo, mut hi) = (xs[i], xs[i + 1]);
            let left = vals[i];
            while hi - lo > BISECTION_WIDTH {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) == left {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    Breakpoints::within(a, b, roots)
}
