//! `L(E, 2)` and `L'(E, 0)` through the approximate functional equation.

use std::f64::consts::PI;

use super::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::hyperg::special::CompensatedSum;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Summation stops once the smaller incomplete-gamma argument passes this.
const ARG_CUTOFF: f64 = 40.0;
/// Largest tolerated disagreement between two splitting points.
pub const CUTOFF_SPREAD_LIMIT: f64 = 1e-8;

/// `E_1(x) = ∫_x^∞ e^{-t}/t dt`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("exp_integral_e1", format!("x = {x} must be positive")));
    }
    if x <= 1.0 {
        let mut acc = CompensatedSum::new();
        acc.add(-EULER_GAMMA - x.ln());
        let mut term = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x / kf;
            let contrib = -term / kf;
            acc.add(contrib);
            if contrib.abs() < 1e-18 * acc.value().abs() {
                break;
            }
        }
        return Ok(acc.value());
    }
    // modified Lentz on e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::non_convergence("exp_integral_e1", format!("continued fraction at x = {x}")))
}

/// Upper incomplete gamma `Γ(s, x)` for the two orders the functional
/// equation at `s = 2` needs: `Γ(2, x) = (1+x)e^{-x}` and `Γ(0, x) = E_1(x)`.
pub fn inc_gamma_upper(s: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("inc_gamma_upper", format!("x = {x} must be positive")));
    }
    match s {
        0 => exp_integral_e1(x),
        2 => Ok((1.0 + x) * (-x).exp()),
        _ => Err(Error::domain("inc_gamma_upper", format!("order {s} not supported"))),
    }
}

/// Number of Dirichlet coefficients needed at splitting point `cutoff`.
fn terms_needed(conductor: f64, cutoff: f64) -> usize {
    let per_term = 2.0 * PI * cutoff.min(1.0 / cutoff) / conductor.sqrt();
    (ARG_CUTOFF / per_term).ceil() as usize + 1
}

/// `Λ(2)` with `Λ(s) = N^{s/2} (2π)^{-s} Γ(s) L(E, s)`, split at `cutoff`.
fn completed_l_at_2(curve: &CurveSpec, coeffs: &[i64], cutoff: f64) -> Result<f64> {
    let n_cond = curve.conductor as f64;
    let sqrt_n = n_cond.sqrt();
    let eps = f64::from(curve.root_number);
    let mut acc = CompensatedSum::new();
    for (i, &an) in coeffs.iter().enumerate().take(terms_needed(n_cond, cutoff)) {
        if an == 0 {
            continue;
        }
        let two_pi_n = 2.0 * PI * (i + 1) as f64;
        let direct = n_cond / (two_pi_n * two_pi_n) * inc_gamma_upper(2, two_pi_n * cutoff / sqrt_n)?;
        let dual = eps * inc_gamma_upper(0, two_pi_n / (cutoff * sqrt_n))?;
        acc.add(an as f64 * (direct + dual));
    }
    Ok(acc.value())
}

/// `L(E, 2)` from the functional equation split at `cutoff`. The value is
/// also computed at a second splitting point; if the two disagree by more
/// than [`CUTOFF_SPREAD_LIMIT`] the model, conductor or root number is
/// inconsistent and `NonConvergence` is returned.
pub fn l_e_2(curve: &CurveSpec, cutoff: f64) -> Result<f64> {
    if !(0.5..=2.0).contains(&cutoff) {
        return Err(Error::domain("L_E_2", format!("cutoff {cutoff} outside [0.5, 2]")));
    }
    let witness = if (cutoff - 1.0).abs() < 0.1 { 1.3 } else { 1.0 };
    let n_cond = curve.conductor as f64;
    let n_terms = terms_needed(n_cond, cutoff).max(terms_needed(n_cond, witness));
    let coeffs = curve.an_coeffs(n_terms)?;
    let to_l = (2.0 * PI).powi(2) / n_cond;
    let value = completed_l_at_2(curve, &coeffs, cutoff)? * to_l;
    let check = completed_l_at_2(curve, &coeffs, witness)? * to_l;
    if (value - check).abs() > CUTOFF_SPREAD_LIMIT {
        return Err(Error::non_convergence(
            "L_E_2",
            format!(
                "curve {}: splitting points {cutoff} and {witness} give {value} and {check}",
                curve.label
            ),
        ));
    }
    Ok(value)
}

/// `L'(E, 0) = N L(E, 2) / (4π^2)` for root number `+1`.
///
/// From `Λ(0) = εΛ(2)`: near `s = 0`, `Γ(s) L(E, s) → L'(E, 0)` because
/// `L(E, 0) = 0`, so `L'(E, 0) = ε N (2π)^{-2} L(E, 2)`.
///
/// A declared root number that does not fit the curve shows up first, as
/// the `NonConvergence` of [`l_e_2`].
pub fn lprime_e_0(curve: &CurveSpec) -> Result<f64> {
    let l2 = l_e_2(curve, 1.0)?;
    if curve.root_number != 1 {
        return Err(Error::domain(
            "Lprime_E_0",
            format!("curve {} has root number {}", curve.label, curve.root_number),
        ));
    }
    Ok(curve.conductor as f64 * l2 / (4.0 * PI * PI))
}
