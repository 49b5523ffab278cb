//! Hermite functions, Laguerre polynomials, Gauss rules and matrix elements
//! of the Schrödinger representation.

mod hermite;
mod laguerre;
mod quadrature;
mod rep;

pub use hermite::{hermite_fn, hermite_fn_1d, hermite_poly_normalized, scaled_hermite, HermiteBasis};
pub use laguerre::{
    binom_weight, laguerre, laguerre_all, laguerre_derivative, laguerre_functions, LaguerreEvaluator,
};
pub use quadrature::{composite_legendre, QuadratureRule};
pub use rep::{level_trace, level_trace_closed_form, multi_indices_of_level, rep_matrix_element};

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}
