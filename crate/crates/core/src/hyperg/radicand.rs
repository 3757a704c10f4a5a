//! Integrals of `1/√R(v)` where `R` is given in factored form.
//!
//! `R(v) = scale · Π (v - r_i) · q(v)` with simple real roots `r_i` and an
//! optional quadratic `q` without real roots in the range of interest.
//! Only the parts of the range where `R > 0` contribute (the real part of
//! the elliptic integral). Every simple root on the boundary of such a part
//! is removed analytically by a substitution, so the quadrature only sees
//! bounded integrands.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, Breakpoints, QuadratureResult};

#[derive(Debug, Clone, PartialEq)]
pub struct FactoredRadicand {
    scale: f64,
    roots: Vec<f64>,
    quad: Option<Quadratic>,
    hints: Vec<f64>,
}

/// The quadratic factor, either by coefficients or as `a (v - v0)^2 + min`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Quadratic {
    Coefficients([f64; 3]),
    Vertex { a: f64, v0: f64, min: f64 },
}

impl Quadratic {
    fn at(self, v: f64) -> f64 {
        match self {
            Quadratic::Coefficients([a, b, c]) => (a * v + b) * v + c,
            Quadratic::Vertex { a, v0, min } => a * (v - v0) * (v - v0) + min,
        }
    }
}

/// One end of a positive interval.
#[derive(Debug, Clone, Copy, PartialEq)]
enum End {
    NegInfinity,
    Root(usize),
    Plain(f64),
}

impl FactoredRadicand {
    /// `scale · Π (v - r_i) · (a v^2 + b v + c)`.
    pub fn new(scale: f64, mut roots: Vec<f64>, quad: Option<[f64; 3]>) -> Self {
        roots.sort_by(f64::total_cmp);
        // a close pair of complex roots pinches the integrand at the vertex
        let hints = match quad {
            Some([a, b, _]) if a != 0.0 => vec![-b / (2.0 * a)],
            _ => Vec::new(),
        };
        FactoredRadicand {
            scale,
            roots,
            quad: quad.map(Quadratic::Coefficients),
            hints,
        }
    }

    /// Same as [`FactoredRadicand::new`] with the quadratic given as
    /// `a (v - v0)^2 + min`. Use this when `min` is small and known exactly,
    /// so the factor keeps full relative accuracy near its vertex.
    pub fn with_vertex(scale: f64, mut roots: Vec<f64>, a: f64, v0: f64, min: f64) -> Self {
        roots.sort_by(f64::total_cmp);
        FactoredRadicand {
            scale,
            roots,
            quad: Some(Quadratic::Vertex { a, v0, min }),
            hints: vec![v0],
        }
    }

    /// Hints strictly inside `(va, vb)`, mapped through `to_local`.
    fn local_hints(&self, va: f64, vb: f64, lo: f64, hi: f64, to_local: impl Fn(f64) -> f64) -> Breakpoints {
        let pts = self.hints.iter().filter(|&&h| h > va && h < vb).map(|&h| to_local(h));
        Breakpoints::within(lo, hi, pts)
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    fn quad_at(&self, v: f64) -> f64 {
        self.quad.map_or(1.0, |q| q.at(v))
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.eval_without(v, &[])
    }

    /// `R(v)` with the linear factors of the listed roots left out.
    fn eval_without(&self, v: f64, skip: &[usize]) -> f64 {
        let mut acc = self.scale * self.quad_at(v);
        for (i, &r) in self.roots.iter().enumerate() {
            if !skip.contains(&i) {
                acc *= v - r;
            }
        }
        acc
    }

    fn root_value(&self, end: End) -> f64 {
        match end {
            End::NegInfinity => f64::NEG_INFINITY,
            End::Root(i) => self.roots[i],
            End::Plain(v) => v,
        }
    }

    /// `∫ dv/√R(v)` over `{v ∈ (lo, hi) : R(v) > 0}`; `lo` may be `-∞`.
    ///
    /// An `hi` within `1e-12` (relative) of a root is snapped onto it.
    pub fn positive_part_integral(&self, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
        if !(lo < hi) {
            return Err(Error::domain(
                "positive_part_integral",
                format!("empty range [{lo}, {hi}]"),
            ));
        }
        let snap = |x: f64| -> End {
            if x == f64::NEG_INFINITY {
                return End::NegInfinity;
            }
            for (i, &r) in self.roots.iter().enumerate() {
                if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
                    return End::Root(i);
                }
            }
            End::Plain(x)
        };
        let mut ends = vec![snap(lo)];
        for (i, &r) in self.roots.iter().enumerate() {
            let e = End::Root(i);
            if r > lo && r < hi && !ends.contains(&e) && snap(hi) != e {
                ends.push(e);
            }
        }
        ends.push(snap(hi));

        let mut total = QuadratureResult::empty();
        for w in ends.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (va, vb) = (self.root_value(a), self.root_value(b));
            if !(va < vb) {
                continue;
            }
            let probe = if va.is_finite() {
                0.5 * (va + vb)
            } else {
                vb - 1.0 - vb.abs()
            };
            if self.eval(probe) <= 0.0 {
                continue;
            }
            total = total.combine(self.piece(a, b, tol)?);
        }
        if !total.converged {
            return Err(Error::non_convergence(
                "positive_part_integral",
                format!("error estimate {:e} on [{lo}, {hi}]", total.error_estimate),
            ));
        }
        Ok(total)
    }

    fn piece(&self, a: End, b: End, tol: f64) -> Result<QuadratureResult> {
        let (va, vb) = (self.root_value(a), self.root_value(b));
        match (a, b) {
            (End::Root(ia), End::Root(ib)) => {
                // v = mid - h cos φ; the two root factors combine into h^2 sin^2 φ
                let h = 0.5 * (vb - va);
                let f = |phi: f64| {
                    let v = if phi < 0.5 * PI {
                        va + 2.0 * h * (0.5 * phi).sin().powi(2)
                    } else {
                        vb - 2.0 * h * (0.5 * phi).cos().powi(2)
                    };
                    1.0 / (-self.eval_without(v, &[ia, ib])).sqrt()
                };
                let bps = self.local_hints(va, vb, 0.0, PI, |v| ((va + h - v) / h).clamp(-1.0, 1.0).acos());
                integrate_adaptive(f, 0.0, PI, tol, &bps)
            }
            (End::Root(ia), End::Plain(_)) => {
                let f = |tau: f64| 2.0 / self.eval_without(va + tau * tau, &[ia]).sqrt();
                let top = (vb - va).sqrt();
                integrate_adaptive(f, 0.0, top, tol, &self.local_hints(va, vb, 0.0, top, |v| (v - va).sqrt()))
            }
            (End::Plain(_), End::Root(ib)) => {
                let f = |tau: f64| 2.0 / (-self.eval_without(vb - tau * tau, &[ib])).sqrt();
                let top = (vb - va).sqrt();
                integrate_adaptive(f, 0.0, top, tol, &self.local_hints(va, vb, 0.0, top, |v| (vb - v).sqrt()))
            }
            (End::Plain(_), End::Plain(_)) => integrate_adaptive(
                |v| 1.0 / self.eval(v).sqrt(),
                va,
                vb,
                tol,
                &self.local_hints(va, vb, va, vb, |v| v),
            ),
            (End::NegInfinity, End::Root(ib)) => {
                // v = r - τ^2, τ = σ/(1-σ)
                let f = |s: f64| {
                    let tau = s / (1.0 - s);
                    let jac = 1.0 / ((1.0 - s) * (1.0 - s));
                    2.0 * jac / (-self.eval_without(vb - tau * tau, &[ib])).sqrt()
                };
                integrate_adaptive(f, 0.0, 1.0, tol, &self.tail_hints(vb))
            }
            (End::NegInfinity, End::Plain(_)) => {
                let f = |s: f64| {
                    let tau = s / (1.0 - s);
                    let jac = 1.0 / ((1.0 - s) * (1.0 - s));
                    2.0 * tau * jac / self.eval(vb - tau * tau).sqrt()
                };
                integrate_adaptive(f, 0.0, 1.0, tol, &self.tail_hints(vb))
            }
            _ => Err(Error::domain("positive_part_integral", "malformed interval")),
        }
    }

    fn tail_hints(&self, vb: f64) -> Breakpoints {
        self.local_hints(f64::NEG_INFINITY, vb, 0.0, 1.0, |v| {
            let tau = (vb - v).sqrt();
            tau / (1.0 + tau)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_and_arcsine_integrals() {
        // ∫_0^1 dt/√(t(1-t)) = π
        let r = FactoredRadicand::new(-1.0, vec![0.0, 1.0], None);
        let got = r.positive_part_integral(0.0, 1.0, 1e-14).unwrap();
        assert!((got.value - PI).abs() < 1e-13);
        // ∫_0^{1/2} dt/√(t(1-t)) = π/2
        let got = r.positive_part_integral(0.0, 0.5, 1e-14).unwrap();
        assert!((got.value - PI / 2.0).abs() < 1e-13);
        // only the positive part of a wider range counts
        let got = r.positive_part_integral(-3.0, 5.0, 1e-14).unwrap();
        assert!((got.value - PI).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_pieces() {
        // ∫_{-∞}^{-1} dv/√(-v^3) = ∫_1^∞ u^{-3/2} du = 2
        let r = FactoredRadicand::new(-1.0, vec![0.0], Some([1.0, 0.0, 0.0]));
        let got = r.positive_part_integral(f64::NEG_INFINITY, -1.0, 1e-13).unwrap();
        assert!((got.value - 2.0).abs() < 1e-12, "{got:?}");
        // ∫_{-∞}^{-1} dv/√((-1-v)(v^2+1))·... against the plain tail map
        let r = FactoredRadicand::new(-1.0, vec![-1.0], Some([1.0, 0.0, 1.0]));
        let got = r.positive_part_integral(f64::NEG_INFINITY, -1.0, 1e-13).unwrap();
        let plain = crate::quadrature::integrate_to_upper(
            |v| 1.0 / (-(v + 1.0) * (v * v + 1.0)).sqrt(),
            -2.0,
            1e-13,
            &Breakpoints::none(),
        )
        .unwrap();
        let head = r.positive_part_integral(-2.0, -1.0, 1e-13).unwrap();
        assert!((got.value - plain.value - head.value).abs() < 1e-11);
    }

    #[test]
    fn empty_range_is_rejected() {
        let r = FactoredRadicand::new(1.0, vec![], None);
        assert!(r.positive_part_integral(1.0, 1.0, 1e-10).is_err());
    }
}
