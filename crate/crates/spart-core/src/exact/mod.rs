//! Exact arithmetic in formal `q^{1/2}`, `d^{1/2}`, `K^{1/2}`.

pub mod monomial;
pub mod scalar;
pub mod series;
pub mod spectral;

pub use monomial::{EvalPoint, Monomial};
pub use scalar::ScalarExpr;
pub use series::{principal_specialize, series_expand_inverse_pochhammer, CharSeries};
pub use spectral::SpectralFunction;

/// `x -> psi_k(c x)`.
pub fn psi(k: i64, c: Monomial) -> SpectralFunction {
    SpectralFunction::psi(k, c)
}

pub fn delta_coefficient(f: &SpectralFunction, x0: Monomial) -> crate::Result<ScalarExpr> {
    f.delta_coefficient(x0)
}

pub fn evaluate(f: &SpectralFunction, x0: Monomial) -> crate::Result<ScalarExpr> {
    f.evaluate(x0)
}
