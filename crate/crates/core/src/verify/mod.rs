//! Both sides of every identity, computed independently and compared row
//! by row.

pub mod rational;
pub mod report;

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyperg::{
    dg_dk, dg_dk_i1, dg_dk_lemma4, dg_dk_pform, dgt_dk, dgt_dk_tform,
};
use crate::lfunc::{builtin_curves, find_curve, lprime_chi_minus1, lprime_e_0, CurveSpec, DirichletChar};
use crate::mahler::{g_boyd, g_tilde, mahler_jensen};
use crate::polyfam::{bosman_q, boyd_p, thm3_p, thm3_q, thm3_r, BivariatePolynomial, Family};
use crate::quadrature::QuadratureResult;
pub use rational::{rational_ratio, RationalGuess};
pub use report::{RowFailure, VerificationRow};

/// Measure against measure.
pub const TOL_MEASURE: f64 = 1e-6;
/// Measure against an L-value.
pub const TOL_L_VALUE: f64 = 1e-5;
/// Derivative formula against derivative formula, and integral identities.
pub const TOL_DERIVATIVE: f64 = 1e-8;
/// Derivative formula against finite differences of a measure.
pub const TOL_FINITE_DIFFERENCE: f64 = 1e-5;
/// Threshold the obstruction rows are measured against.
pub const TOL_OBSTRUCTION: f64 = 1e-3;

/// Step of the finite-difference checks.
pub const FD_STEP: f64 = 1e-3;
/// Quadrature tolerance for measures fed into finite differences.
const FD_QUAD_TOL: f64 = 1e-13;

/// `16/(3√3)`, the edge of the range where `m(P_k) = m(R_k)`.
pub fn theorem3_boundary() -> f64 {
    16.0 / (3.0 * 3f64.sqrt())
}

pub const THEOREM1_POSITIVE: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0];
pub const THEOREM1_NEGATIVE: [f64; 5] = [-1.0, -1.5, -2.0, -4.0, -8.0];
pub const LEMMA5_NEGATIVE: [f64; 4] = [-8.0, -4.0, -2.0, -1.5];
pub const LEMMA5_POSITIVE: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];
pub const ASYMPTOTIC_K: [f64; 3] = [-50.0, -100.0, -200.0];

/// One identity `m(Q_k) = c·m(P_{2-k}) = r·L'(E, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Identity {
    pub k: f64,
    /// `m(Q_k) / m(P_{2-k})`.
    pub measure_factor: f64,
    /// `m(Q_k) / L'(E, 0)`.
    pub l_factor: i64,
    pub curve: &'static str,
}

pub const THEOREM2: [Theorem2Identity; 6] = [
    Theorem2Identity { k: 1.0, measure_factor: 2.0, l_factor: 2, curve: "E_14" },
    Theorem2Identity { k: 2.0, measure_factor: 2.0, l_factor: 1, curve: "E_36" },
    Theorem2Identity { k: 4.0, measure_factor: 2.0, l_factor: 4, curve: "E_20" },
    Theorem2Identity { k: -2.0, measure_factor: 1.0, l_factor: 3, curve: "Ehat_20" },
    Theorem2Identity { k: -4.0, measure_factor: 1.0, l_factor: 2, curve: "Ehat_36" },
    Theorem2Identity { k: -8.0, measure_factor: 1.0, l_factor: 10, curve: "Ehat_14" },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Bosman,
    Lemma5,
    Asymptotics,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Bosman,
        Suite::Theorem3,
        Suite::Lemma5,
        Suite::Asymptotics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "thm1",
            Suite::Theorem2 => "thm2",
            Suite::Theorem3 => "thm3",
            Suite::Bosman => "bosman",
            Suite::Lemma5 => "lemma5",
            Suite::Asymptotics => "asymp",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Replaces the default tolerance of every counted row.
    pub tol_override: Option<f64>,
    /// Quadrature tolerance for the measures.
    pub quad_tol: f64,
    pub curves: Vec<CurveSpec>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol_override: None,
            quad_tol: 1e-11,
            curves: builtin_curves(),
        }
    }
}

/// Two computed sides with their error estimates.
#[derive(Debug, Clone, Default)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_err: f64,
    pub rhs_err: f64,
    pub note: String,
}

impl Sides {
    fn exact(lhs: f64, rhs: f64) -> Self {
        Sides { lhs, rhs, ..Default::default() }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

type Compute = Box<dyn Fn() -> Result<Sides> + Send + Sync>;

/// A declared row, not yet evaluated.
pub struct Check {
    pub claim_id: String,
    pub tolerance: f64,
    pub informational: bool,
    pub degenerate: bool,
    compute: Compute,
}

impl Check {
    fn new(claim_id: impl Into<String>, tolerance: f64, compute: impl Fn() -> Result<Sides> + Send + Sync + 'static) -> Self {
        Check {
            claim_id: claim_id.into(),
            tolerance,
            informational: false,
            degenerate: false,
            compute: Box::new(compute),
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn degenerate(mut self, yes: bool) -> Self {
        self.degenerate = yes;
        self
    }

    fn run(&self, tol_override: Option<f64>) -> VerificationRow {
        let tolerance = match tol_override {
            Some(t) if !self.informational => t,
            _ => self.tolerance,
        };
        let start = Instant::now();
        let outcome = (self.compute)();
        let ms = start.elapsed().as_millis() as u64;
        let mut row = match outcome {
            Ok(s) => {
                let mut row = VerificationRow::new(&self.claim_id, s.lhs, s.rhs, s.lhs_err, s.rhs_err, tolerance, ms);
                row.note = s.note;
                row
            }
            Err(e) => VerificationRow::failed(&self.claim_id, tolerance, &e, ms),
        };
        row.informational = self.informational;
        row.degenerate = self.degenerate;
        row
    }
}

/// Evaluates the checks in parallel; rows come back in declaration order.
pub fn run_checks(checks: &[Check], cfg: &VerifyConfig) -> Vec<VerificationRow> {
    checks.par_iter().map(|c| c.run(cfg.tol_override)).collect()
}

fn accepted(res: QuadratureResult, what: &str) -> Result<QuadratureResult> {
    if res.converged {
        Ok(res)
    } else {
        Err(Error::non_convergence(
            "measure",
            format!("{what}: error estimate {:e} after {} evaluations", res.error_estimate, res.evaluations),
        ))
    }
}

fn measure(p: &BivariatePolynomial, tol: f64, what: &str) -> Result<QuadratureResult> {
    accepted(mahler_jensen(p, tol)?, what)
}

fn fmt_k(k: f64) -> String {
    format!("{k}")
}

pub fn theorem1_checks(k_pos: &[f64], k_neg: &[f64], cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if k_pos.is_empty() || k_neg.is_empty() {
        return Err(Error::Config("theorem 1 needs both parameter lists".into()));
    }
    if let Some(k) = k_pos.iter().find(|k| !(0.0..=4.0).contains(*k)) {
        return Err(Error::Config(format!("k = {k} is outside [0, 4]")));
    }
    if let Some(k) = k_neg.iter().find(|k| **k > -1.0) {
        return Err(Error::Config(format!("k = {k} exceeds -1")));
    }
    let tol = cfg.quad_tol;
    let branch = k_pos.iter().map(|&k| (k, 2.0)).chain(k_neg.iter().map(|&k| (k, 1.0)));
    Ok(branch
        .map(|(k, c)| {
            Check::new(format!("thm1:k={}", fmt_k(k)), TOL_MEASURE, move || {
                let q = measure(&bosman_q(k), tol, "m(Q_k)")?;
                let p = measure(&boyd_p(2.0 - k), tol, "m(P_{2-k})")?;
                Ok(Sides {
                    lhs: q.value,
                    rhs: c * p.value,
                    lhs_err: q.error_estimate,
                    rhs_err: c * p.error_estimate,
                    note: format!("c = {c}"),
                })
            })
            .degenerate(Family::BosmanQ.is_degenerate(k))
        })
        .collect())
}

pub fn theorem2_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let tol = cfg.quad_tol;
    let mut checks = Vec::new();
    for id in THEOREM2 {
        let curve = find_curve(&cfg.curves, id.curve)?.clone();
        let k = id.k;
        let c = id.measure_factor;
        checks.push(
            Check::new(format!("thm2:k={}:Q=cP", fmt_k(k)), TOL_MEASURE, move || {
                let q = measure(&bosman_q(k), tol, "m(Q_k)")?;
                let p = measure(&boyd_p(2.0 - k), tol, "m(P_{2-k})")?;
                Ok(Sides {
                    lhs: q.value,
                    rhs: c * p.value,
                    lhs_err: q.error_estimate,
                    rhs_err: c * p.error_estimate,
                    note: format!("c = {c}"),
                })
            })
            .degenerate(Family::BosmanQ.is_degenerate(k)),
        );
        let r = id.l_factor as f64 / c;
        checks.push(Check::new(
            format!("thm2:k={}:P=rL:{}", fmt_k(k), id.curve),
            TOL_L_VALUE,
            move || {
                let p = measure(&boyd_p(2.0 - k), tol, "m(P_{2-k})")?;
                let l = lprime_e_0(&curve)?;
                let guess = rational_ratio(p.value, l, rational::MAX_DENOMINATOR)
                    .map_or_else(|| "no small rational".to_string(), |g| format!("ratio {g}"));
                Ok(Sides {
                    lhs: p.value,
                    rhs: r * l,
                    lhs_err: p.error_estimate,
                    rhs_err: 0.0,
                    note: format!("r = {r}; {guess}"),
                })
            },
        ));
    }
    Ok(checks)
}

pub fn bosman_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.quad_tol;
    [(-1.0, 2.0, DirichletChar::MINUS_3), (8.0, 4.0, DirichletChar::MINUS_4)]
        .into_iter()
        .map(|(k, c, chi)| {
            Check::new(
                format!("bosman:k={}:chi{}", fmt_k(k), chi.discriminant()),
                TOL_MEASURE,
                move || {
                    let q = measure(&bosman_q(k), tol, "m(Q_k)")?;
                    let l = lprime_chi_minus1(chi)?;
                    Ok(Sides {
                        lhs: q.value,
                        rhs: c * l,
                        lhs_err: q.error_estimate,
                        rhs_err: 0.0,
                        note: format!("c = {c}"),
                    })
                },
            )
            .degenerate(Family::BosmanQ.is_degenerate(k))
        })
        .collect()
}

fn measure_pair(a: BivariatePolynomial, b: BivariatePolynomial, tol: f64) -> Result<Sides> {
    let ma = measure(&a, tol, "lhs")?;
    let mb = measure(&b, tol, "rhs")?;
    Ok(Sides {
        lhs: ma.value,
        rhs: mb.value,
        lhs_err: ma.error_estimate,
        rhs_err: mb.error_estimate,
        note: String::new(),
    })
}

pub fn theorem3_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.quad_tol;
    let edge = theorem3_boundary();
    let mut checks: Vec<Check> = [3.08, -3.08, 4.0, -4.0, 6.0, -6.0, 10.0, edge, -edge]
        .into_iter()
        .map(|k| {
            let id = if k.abs() == edge {
                format!("thm3:P=R:k={}16/(3sqrt3)", if k < 0.0 { "-" } else { "" })
            } else {
                format!("thm3:P=R:k={}", fmt_k(k))
            };
            Check::new(id, TOL_MEASURE, move || measure_pair(thm3_p(k), thm3_r(k), tol))
                .degenerate(Family::T3R.is_degenerate(k))
        })
        .collect();
    checks.extend([4.0, 5.0, 8.0].into_iter().map(|k| {
        Check::new(format!("thm3:Q=R:k={}", fmt_k(k)), TOL_MEASURE, move || {
            measure_pair(thm3_q(k + 2.0), thm3_r(k), tol)
        })
        .degenerate(Family::T3R.is_degenerate(k))
    }));
    checks.push(
        Check::new("thm3:P=R:k=1:excluded", TOL_MEASURE, move || {
            Ok(measure_pair(thm3_p(1.0), thm3_r(1.0), tol)?
                .with_note("inside |k| < 16/(3sqrt3); no identity expected"))
        })
        .informational(),
    );
    checks
}

/// `(4 D(h) - D(2h)) / 3` for the central difference `D`.
pub fn richardson_central<F: Fn(f64) -> Result<f64>>(f: F, k: f64, h: f64) -> Result<f64> {
    let d = |s: f64| -> Result<f64> { Ok((f(k + s)? - f(k - s)?) / (2.0 * s)) };
    Ok((4.0 * d(h)? - d(2.0 * h)?) / 3.0)
}

/// Richardson-extrapolated second-order backward difference, for points
/// where the function is only smooth from the left.
pub fn richardson_backward<F: Fn(f64) -> Result<f64>>(f: F, k: f64, h: f64) -> Result<f64> {
    let f0 = f(k)?;
    let d = |s: f64| -> Result<f64> { Ok((3.0 * f0 - 4.0 * f(k - s)? + f(k - 2.0 * s)?) / (2.0 * s)) };
    Ok((4.0 * d(h)? - d(2.0 * h)?) / 3.0)
}

fn g_value(k: f64) -> Result<f64> {
    Ok(accepted(g_boyd(k, FD_QUAD_TOL)?, "g(k)")?.value)
}

fn g_tilde_value(k: f64) -> Result<f64> {
    Ok(accepted(g_tilde(k, FD_QUAD_TOL)?, "g~(k)")?.value)
}

/// `dg̃/dk` by finite differences; one-sided at `k = 4`, where `g̃` picks up
/// a `(k-4)^{3/2}` term from the right.
pub fn dgt_dk_difference(k: f64, h: f64) -> Result<f64> {
    if k == 4.0 {
        richardson_backward(g_tilde_value, k, h)
    } else {
        richardson_central(g_tilde_value, k, h)
    }
}

pub fn dg_dk_difference(k: f64, h: f64) -> Result<f64> {
    richardson_central(g_value, k, h)
}

pub fn lemma5_checks(_cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let ks = LEMMA5_NEGATIVE.iter().map(|&k| (k, 1.0)).chain(LEMMA5_POSITIVE.iter().map(|&k| (k, 2.0)));
    for (k, c) in ks.clone() {
        checks.push(Check::new(format!("lemma5:k={}", fmt_k(k)), TOL_DERIVATIVE, move || {
            Ok(Sides::exact(dgt_dk(k)?, c * dg_dk(k)?).with_note(format!("c = {c}")))
        }));
    }
    for (k, _) in ks.clone() {
        checks.push(Check::new(format!("lemma5:fd:dgt:k={}", fmt_k(k)), TOL_FINITE_DIFFERENCE, move || {
            Ok(Sides::exact(dgt_dk(k)?, dgt_dk_difference(k, FD_STEP)?))
        }));
        checks.push(Check::new(format!("lemma5:fd:dg:k={}", fmt_k(k)), TOL_FINITE_DIFFERENCE, move || {
            Ok(Sides::exact(dg_dk(k)?, dg_dk_difference(k, FD_STEP)?))
        }));
    }
    for k in [-2.0, -4.0, 3.0] {
        checks.push(Check::new(format!("subst:t-v:k={}", fmt_k(k)), TOL_DERIVATIVE, move || {
            Ok(Sides::exact(dgt_dk_tform(k)?, dgt_dk(k)?))
        }));
    }
    for k in [2.0, 4.0, 7.0] {
        checks.push(Check::new(format!("subst:I1:k={}", fmt_k(k)), TOL_DERIVATIVE, move || {
            Ok(Sides::exact(dg_dk_i1(k)?, dg_dk(k)?))
        }));
    }
    for p in [0.3, 0.5, 0.8] {
        checks.push(Check::new(format!("subst:pform:p={}", fmt_k(p)), TOL_DERIVATIVE, move || {
            Ok(Sides::exact(dg_dk_pform(p)?, dg_dk_lemma4(p)?))
        }));
    }
    checks.push(
        Check::new("obstruction:k=6:c=2", TOL_OBSTRUCTION, || {
            Ok(Sides::exact(dgt_dk(6.0)?, 2.0 * dg_dk(6.0)?).with_note("4 < k < 8: no relation expected"))
        })
        .informational(),
    );
    for c in [1.0, 2.0] {
        checks.push(
            Check::new(format!("obstruction:k=10:c={c}"), TOL_OBSTRUCTION, move || {
                Ok(Sides::exact(dgt_dk(10.0)?, c * dg_dk(10.0)?).with_note("k > 8: no relation expected"))
            })
            .informational(),
        );
    }
    checks
}

/// Constant in the `O(1/|k|)` bound checked by the asymptotic rows.
pub const ASYMPTOTIC_CONSTANT: f64 = 5.0;
/// Scaled gaps `|g̃ - g|·|k|` below this are treated as rounding noise.
pub const ASYMPTOTIC_NOISE: f64 = 1e-6;

pub fn asymptotic_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let tol = cfg.quad_tol;
    let mut checks = Vec::new();
    for k in ASYMPTOTIC_K {
        checks.push(Check::new(
            format!("asymp:log:k={}", fmt_k(k)),
            ASYMPTOTIC_CONSTANT / k.abs(),
            move || {
                let q = accepted(g_tilde(k, tol)?, "g~(k)")?;
                let fitted = (q.value - k.abs().ln()).abs() * k.abs();
                Ok(Sides {
                    lhs: q.value,
                    rhs: k.abs().ln(),
                    lhs_err: q.error_estimate,
                    rhs_err: 0.0,
                    note: format!("fitted C = {fitted:.6}"),
                })
            },
        ));
    }
    // scaled gaps at consecutive samples should not grow by more than 20%
    let scaled_gap = move |k: f64| -> Result<f64> {
        let t = accepted(g_tilde(k, tol)?, "g~(k)")?.value;
        let g = accepted(g_boyd(k, tol)?, "g(k)")?.value;
        Ok((t - g).abs() * k.abs())
    };
    for w in ASYMPTOTIC_K.windows(2) {
        let (prev, k) = (w[0], w[1]);
        checks.push(Check::new(format!("asymp:decay:k={}", fmt_k(k)), ASYMPTOTIC_NOISE, move || {
            let before = scaled_gap(prev)?;
            let now = scaled_gap(k)?;
            // lhs is the growth beyond the allowed 20%, zero when decaying
            let growth = (now - 1.2 * before).max(0.0);
            Ok(Sides::exact(growth, 0.0).with_note(format!(
                "|g~-g|·|k| = {now:.3e} at k = {k}, {before:.3e} at k = {prev}"
            )))
        }));
    }
    checks.push(Check::new("asymp:monomial:k=-100", 1e-14, move || {
        let p = BivariatePolynomial::from_terms([(1, 1, -100.0)]);
        let m = measure(&p, tol, "m(kXY)")?;
        Ok(Sides::exact(m.value, 100f64.ln()))
    }));
    checks
}

pub fn suite_checks(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Theorem1 => theorem1_checks(&THEOREM1_POSITIVE, &THEOREM1_NEGATIVE, cfg)?,
        Suite::Theorem2 => theorem2_checks(cfg)?,
        Suite::Theorem3 => theorem3_checks(cfg),
        Suite::Bosman => bosman_checks(cfg),
        Suite::Lemma5 => lemma5_checks(cfg),
        Suite::Asymptotics => asymptotic_checks(cfg),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(suite_checks(s, cfg)?);
            }
            all
        }
    })
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    Ok(run_checks(&suite_checks(suite, cfg)?, cfg))
}

pub fn run_theorem1(k_pos: &[f64], k_neg: &[f64], cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    Ok(run_checks(&theorem1_checks(k_pos, k_neg, cfg)?, cfg))
}

pub fn run_theorem2(cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    run_suite(Suite::Theorem2, cfg)
}

pub fn run_bosman(cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    run_suite(Suite::Bosman, cfg)
}

pub fn run_theorem3(cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    run_suite(Suite::Theorem3, cfg)
}

pub fn run_lemma5(cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    run_suite(Suite::Lemma5, cfg)
}

pub fn run_asymptotics(cfg: &VerifyConfig) -> Result<Vec<VerificationRow>> {
    run_suite(Suite::Asymptotics, cfg)
}

/// Process exit status for a finished run: 0 if every counted row passed,
/// 3 if a counted row failed to converge, 1 otherwise.
pub fn exit_status(rows: &[VerificationRow]) -> i32 {
    let counted = || rows.iter().filter(|r| r.counts_toward_status());
    if counted().all(|r| r.passed) {
        0
    } else if counted().any(|r| r.failure == Some(RowFailure::NonConvergence)) {
        3
    } else {
        1
    }
}
