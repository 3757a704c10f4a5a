//! The L-values on the arithmetic side: `L'(E, 0)` for elliptic curves and
//! `L'(χ, -1)` for the odd quadratic characters of conductor 3 and 4.

pub mod afe;
pub mod curve;
pub mod dirichlet;

pub use afe::{exp_integral_e1, inc_gamma_upper, l_e_2, lprime_e_0};
pub use curve::{builtin_curves, configured_curves, find_curve, load_curves, parse_curves, CurveSpec};
pub use dirichlet::{
    dirichlet_l, dirichlet_l_hurwitz, hurwitz_zeta, lprime_chi_minus1, lprime_chi_minus1_difference,
    DirichletChar,
};
