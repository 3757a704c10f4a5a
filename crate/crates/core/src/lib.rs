//! Logarithmic Mahler measures of two-variable polynomial families and the
//! special-function machinery needed to compare them.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyfam`] builds the polynomial families and the circle functions
//!   `B_k` and `Δ_k` of Bosman's family.
//! * [`quadrature`] is an adaptive Gauss–Kronrod integrator with breakpoint
//!   support and endpoint smoothing.
//! * [`mahler`] computes `m(P)` through Jensen's formula, with a tensor-grid
//!   average as an independent check.
//! * [`hyperg`] holds the constant-term sequence, its Picard–Fuchs
//!   recurrence, `₂F₁` evaluation, AGM elliptic integrals and the closed
//!   forms of the measure derivatives.
//! * [`lfunc`] evaluates `L'(E,0)` for elliptic curves and `L'(χ,-1)` for
//!   the odd quadratic characters of conductor 3 and 4.
//! * [`verify`] runs every identity as a scenario and produces reports.

pub mod error;
pub mod hyperg;
pub mod lfunc;
pub mod mahler;
pub mod polyfam;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
