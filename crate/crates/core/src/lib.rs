//! Middle coefficients of `(1+x)(1+x^2)...(1+x^n)`.
//!
//! `S(n)` is the coefficient of `x^{n(n+1)/4}` for `n ≡ 0, 3 (mod 4)`. This
//! crate computes it exactly ([`spectrum`]), in scaled floating point for
//! large `n` ([`logdp`]), through its Fourier integral
//! `S(n) = (2^n / pi) ∫_{-pi/2}^{pi/2} prod cos(kt) dt` ([`quadrature`]), and
//! compares it with the Laplace-method estimates ([`asymptotics`]). The
//! inequalities used to control the integrand away from the origin are
//! checked numerically in [`cosprod`] and [`bounds`].
//!
//! Numerical code is generic over [`Real`]; the aliases below fix the scalar.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod cosprod;
pub mod datastore;
mod dd;
pub mod erf;
mod error;
mod extended;
pub mod legendre;
pub mod logdp;
pub mod quadrature;
mod scalar;
pub mod spectrum;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use extended::{ExtendedFloat, F64_ROUNDOFF};
pub use scalar::{Precision, Real};

pub type SignedLog64 = cosprod::SignedLogValue<f64>;
pub type SignedLogDd = cosprod::SignedLogValue<DoubleDouble>;
pub type QuadratureResult64 = quadrature::QuadratureResult<f64>;
pub type QuadratureResultDd = quadrature::QuadratureResult<DoubleDouble>;
pub type GaussLegendre64 = legendre::GaussLegendre<f64>;
pub type GaussLegendreDd = legendre::GaussLegendre<DoubleDouble>;
