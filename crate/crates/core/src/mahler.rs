//! Mahler measures of two-variable polynomials.
//!
//! The main route is Jensen's formula in `y`: for fixed `x = e^{iθ}`,
//!
//! ```text
//! ∫ log|p(x, e^{iφ})| dφ/2π = log|lead(x)| + Σ log⁺|y_i(x)|
//! ```
//!
//! where `y_i(x)` are the roots in `y`. The remaining integral over `θ` is
//! done on `[0, π]` (real coefficients make the integrand even), cut at the
//! points where a root crosses the unit circle and where the leading
//! coefficient vanishes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyfam::{b_of, delta_of, BivariatePolynomial};
use crate::quadrature::{
    find_level_changes, find_sign_changes, integrate_adaptive, Breakpoints, QuadratureResult,
    DEFAULT_SCAN,
};

/// Roots of `|log|y|| ≤ LOG_PLUS_BAND` count as lying on the unit circle.
const LOG_PLUS_BAND: f64 = 1e-12;
/// Crossing detection threshold, looser than `LOG_PLUS_BAND` so that
/// near-double roots do not flicker in and out of the count.
const OUTSIDE_BAND: f64 = 1e-9;

const MAX_ITER: usize = 500;

/// All complex roots of `Σ c_j y^j` (`coeffs[j]` is the coefficient of
/// `y^j`), with multiplicity, by Aberth–Ehrlich simultaneous iteration.
///
/// Initial guesses are spread on circles whose radii come from the Newton
/// polygon of `|c_j|`, which keeps widely separated root moduli (a nearly
/// vanishing leading coefficient, say) well conditioned.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c[c.len() - 1] == Complex64::new(0.0, 0.0) {
        c.pop();
    }
    if c.is_empty() || c.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::domain("polynomial_roots", "zero polynomial"));
    }
    let mut roots = Vec::new();
    // roots at zero
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    let c: Vec<Complex64> = c[zeros..].to_vec();
    let n = c.len() - 1;
    match n {
        0 => return Ok(roots),
        1 => {
            roots.push(-c[0] / c[1]);
            return Ok(roots);
        }
        _ => {}
    }

    let mut z = initial_guesses(&c);
    let deriv: Vec<Complex64> = (1..=n).map(|j| c[j] * j as f64).collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let p = horner_c(&c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let dp = horner_c(&deriv, z[i]);
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    // one Newton polish per root, kept only if it lowers the residual
    for zi in z.iter_mut() {
        let p = horner_c(&c, *zi);
        let dp = horner_c(&deriv, *zi);
        if dp.norm() > 0.0 {
            let cand = *zi - p / dp;
            if cand.is_finite() && horner_c(&c, cand).norm() < p.norm() {
                *zi = cand;
            }
        }
    }
    roots.extend(z);
    Ok(roots)
}

fn horner_c(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let logs: Vec<f64> = c
        .iter()
        .map(|a| if a.norm() > 0.0 { a.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    // upper convex hull of (j, log|c_j|)
    let mut hull: Vec<usize> = Vec::new();
    for j in 0..=n {
        if logs[j] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b - a) as f64 * (logs[j] - logs[a]) - (j - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }
    let mut guesses = Vec::with_capacity(n);
    for (e, w) in hull.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let m = hi - lo;
        let radius = ((logs[lo] - logs[hi]) / m as f64).exp();
        let offset = 0.4 + 0.7 * e as f64;
        for i in 0..m {
            let angle = 2.0 * PI * i as f64 / m as f64 + offset;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// Roots in `y` of `p(x, y)` at fixed `x`.
pub fn roots_in_y(p: &BivariatePolynomial, x: Complex64) -> Result<Vec<Complex64>> {
    let degree = p.degree_y();
    if !(1..=4).contains(&degree) {
        return Err(Error::domain(
            "roots_in_y",
            format!("y-degree must be between 1 and 4, got {degree}"),
        ));
    }
    let coeffs = p.y_coefficients_at(x);
    if coeffs[degree as usize].norm() == 0.0 {
        return Err(Error::LeadingCoefficientVanishes {
            x_re: x.re,
            x_im: x.im,
        });
    }
    polynomial_roots(&coeffs)
}

fn log_plus(z: Complex64) -> f64 {
    let l = z.norm().ln();
    if l > LOG_PLUS_BAND {
        l
    } else {
        0.0
    }
}

/// The Jensen integrand `θ ↦ log|lead(e^{iθ})| + Σ log⁺|y_i(e^{iθ})|`.
#[derive(Debug, Clone)]
pub struct JensenIntegrand {
    source: BivariatePolynomial,
    rows: Vec<Vec<f64>>,
}

impl JensenIntegrand {
    pub fn new(source: BivariatePolynomial) -> Self {
        let rows = source.y_coefficient_polys();
        JensenIntegrand { source, rows }
    }

    pub fn source(&self) -> &BivariatePolynomial {
        &self.source
    }

    fn coeffs_at(&self, theta: f64) -> Vec<Complex64> {
        let x = Complex64::from_polar(1.0, theta);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
            })
            .collect()
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        let coeffs = self.coeffs_at(theta);
        let lead = coeffs[coeffs.len() - 1];
        if lead.norm() == 0.0 {
            return Err(Error::LeadingCoefficientVanishes {
                x_re: theta.cos(),
                x_im: theta.sin(),
            });
        }
        let roots = polynomial_roots(&coeffs)?;
        Ok(lead.norm().ln() + roots.into_iter().map(log_plus).sum::<f64>())
    }

    /// Number of roots strictly outside the unit circle.
    pub fn roots_outside(&self, theta: f64) -> i64 {
        let coeffs = self.coeffs_at(theta);
        match polynomial_roots(&coeffs) {
            Ok(r) => r.iter().filter(|z| z.norm().ln() > OUTSIDE_BAND).count() as i64,
            Err(_) => -1,
        }
    }

    /// Points of `(0, π)` where the leading coefficient vanishes on the circle.
    pub fn leading_zeros(&self) -> Vec<f64> {
        let lead = &self.rows[self.rows.len() - 1];
        let c: Vec<Complex64> = lead.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        match polynomial_roots(&c) {
            Ok(r) => r
                .into_iter()
                .filter(|z| (z.norm() - 1.0).abs() < 1e-10)
                .map(|z| z.arg().abs())
                .filter(|&t| t > 0.0 && t < PI)
                .collect(),
            Err(_) => Vec::new(),
        }
    }

    /// Breakpoints on `[0, π]`: leading-coefficient zeros plus the places
    /// where the number of roots outside the circle changes.
    pub fn breakpoints(&self) -> Breakpoints {
        let lead = Breakpoints::within(0.0, PI, self.leading_zeros());
        let crossings = find_level_changes(|t| self.roots_outside(t), 0.0, PI, DEFAULT_SCAN);
        lead.merged(&crossings, 0.0, PI)
    }
}

/// `m(p)` by Jensen's formula and adaptive quadrature in `θ`.
pub fn mahler_jensen(p: &BivariatePolynomial, tol: f64) -> Result<QuadratureResult> {
    if p.is_zero() {
        return Err(Error::domain("mahler_jensen", "zero polynomial"));
    }
    if p.degree_y() == 0 {
        if p.swap_xy().degree_y() == 0 {
            return Ok(QuadratureResult {
                value: p.coeff(0, 0).abs().ln(),
                error_estimate: 0.0,
                evaluations: 1,
                converged: true,
            });
        }
        // univariate in x: swap roles
        return mahler_jensen(&p.swap_xy(), tol);
    }
    let integrand = JensenIntegrand::new(p.clone());
    let bps = integrand.breakpoints();
    let failure = std::cell::Cell::new(None);
    let f = |t: f64| match integrand.eval(t) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let res = integrate_adaptive(f, 0.0, PI, tol * PI, &bps);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(res?.scaled(1.0 / PI))
}

/// Mahler measure as the midpoint-rule average of `log|p|` over an `n × n`
/// grid on the torus. The grid is offset by half a cell in both angles.
pub fn mahler_2d_grid(p: &BivariatePolynomial, n: usize) -> f64 {
    assert!(n >= 16, "grid size must be at least 16");
    let h = 2.0 * PI / n as f64;
    let ys: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, (j as f64 + 0.5) * h))
        .collect();
    let rows = p.y_coefficient_polys();
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = Complex64::from_polar(1.0, (i as f64 + 0.5) * h);
            let cs: Vec<Complex64> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .rev()
                        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
                })
                .collect();
            let mut row_sum = 0.0;
            for &y in &ys {
                let v = cs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * y + c)
                    .norm();
                if v >= 1e-300 {
                    row_sum += v.ln();
                }
            }
            row_sum
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum();
    sum / (n as f64 * n as f64)
}

/// `log|Y_1(e^{iθ})|` for `Q̃_k`: `log((|B| + √Δ)/2)` where `Δ > 0`, else 0.
pub fn q_integrand_closed(k: f64, theta: f64) -> f64 {
    let delta = delta_of(k, theta);
    if delta <= 0.0 {
        return 0.0;
    }
    let b = b_of(k, theta).abs();
    ((b + delta.sqrt()) * 0.5).ln()
}

/// Zeros of `Δ_k(e^{iθ})` on `(0, π)` where it changes sign.
pub fn delta_breakpoints(k: f64) -> Breakpoints {
    find_sign_changes(|t| delta_of(k, t), 0.0, PI, DEFAULT_SCAN)
}

/// `g̃(k) = m(Q_k)` from the closed-form integrand.
pub fn g_tilde(k: f64, tol: f64) -> Result<QuadratureResult> {
    let bps = delta_breakpoints(k);
    Ok(integrate_adaptive(|t| q_integrand_closed(k, t), 0.0, PI, tol * PI, &bps)?.scaled(1.0 / PI))
}

/// `g(k) = m(P_{2-k})` by the generic Jensen route.
pub fn g_boyd(k: f64, tol: f64) -> Result<QuadratureResult> {
    mahler_jensen(&crate::polyfam::boyd_p(2.0 - k), tol)
}
