//! Laplace-method estimates of `S(n)` and the Gaussian integrals behind them.
//!
//! Near `t = 0` the integrand behaves like `exp(-C t^2)` with
//! `C = n(n+1)(2n+1)/12`, giving the refined estimate
//! `(2^n/pi) sqrt(pi/C)`. Replacing `C` by `n^3/6` gives
//! `sqrt(6/pi) 2^n n^(-3/2)`.
//!
//! The window `n^-(3/2-eps)` leaves `sqrt(C)` times the window at about
//! `n^eps / sqrt 6`, so the truncated Gaussian only gets close to the full one
//! for very large `n`. [`truncated_gaussian_ratio`] is therefore exercised
//! with faster-growing windows as well.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::erf::{erf, ln_erfc};
use crate::error::{Error, Result};
use crate::extended::ExtendedFloat;
use crate::logdp::middle_coefficient_log2;
use crate::scalar::Real;
use crate::spectrum::{middle_coefficient, middle_index, DEFAULT_LIMIT};

/// Budget for the handful of double-double operations in each estimate.
const DD_FORMULA_ERROR: f64 = 1e-29;

fn dd(n: u64) -> DoubleDouble {
    DoubleDouble::of_int(n as i64)
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 || n > 1 << 40 {
        return Err(Error::domain(format!("estimates need 1 <= n <= 2^40, got {n}")));
    }
    Ok(())
}

/// `sqrt(6/pi) 2^n n^(-3/2)`.
pub fn conjecture_estimate(n: u64) -> Result<ExtendedFloat> {
    check_order(n)?;
    let nn = dd(n);
    let v = (DoubleDouble::of(6.0) / (DoubleDouble::PI * nn * nn * nn)).sqrt();
    ExtendedFloat::from_real(v, n as i64, DD_FORMULA_ERROR)
}

/// `(2^n/pi) sqrt(12 pi / (n(n+1)(2n+1)))`.
pub fn refined_estimate(n: u64) -> Result<ExtendedFloat> {
    check_order(n)?;
    let c = dd(n) * dd(n + 1) * dd(2 * n + 1);
    let v = (DoubleDouble::of(12.0) / (DoubleDouble::PI * c)).sqrt();
    ExtendedFloat::from_real(v, n as i64, DD_FORMULA_ERROR)
}

/// `n(n+1)(2n+1)/12`.
pub fn gaussian_exponent(n: u64) -> f64 {
    let n = n as f64;
    n * (n + 1.0) * (2.0 * n + 1.0) / 12.0
}

/// `∫ exp(-C t^2) dt` over the real line, `sqrt(pi/C)`.
pub fn gaussian_integral<T: Real>(c: T) -> Result<T> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::domain(format!("Gaussian integral needs C > 0, got {c}")));
    }
    Ok((T::pi() / c).sqrt())
}

fn check_window<T: Real>(c: T, a: T, b: T) -> Result<()> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::domain(format!("truncated Gaussian needs C > 0, got {c}")));
    }
    if !(a < T::zero()) || !(b > T::zero()) {
        return Err(Error::domain(format!("truncated Gaussian needs a < 0 < b, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// `∫_a^b exp(-C t^2) dt / sqrt(pi/C) = (erf(b sqrt C) + erf(-a sqrt C)) / 2`.
pub fn truncated_gaussian_ratio<T: Real>(c: T, a: T, b: T) -> Result<T> {
    check_window(c, a, b)?;
    let s = c.sqrt();
    Ok((erf(b * s) + erf(-a * s)) / T::of(2.0))
}

/// `ln(1 - truncated_gaussian_ratio(C, a, b))`, resolved even where the ratio
/// itself rounds to 1.
pub fn truncated_gaussian_log_deficit<T: Real>(c: T, a: T, b: T) -> Result<T> {
    check_window(c, a, b)?;
    let s = c.sqrt();
    let x = ln_erfc(b * s);
    let y = ln_erfc(-a * s);
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    Ok(hi + (T::one() + (lo - hi).exp()).ln() - T::ln_2())
}

/// `n^-(3/2 - eps)`, the half-width of the central Laplace region.
pub fn laplace_window(n: u64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/4), got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::domain("laplace window needs n >= 1"));
    }
    Ok(crate::cosprod::laplace_edge(n as f64, epsilon))
}

/// Where the `S(n)` in a [`RatioRecord`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Exact,
    Logdp,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Exact => "exact",
            Source::Logdp => "logdp",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Source::Exact),
            "logdp" => Ok(Source::Logdp),
            other => Err(Error::domain(format!("unknown source {other:?} (expected exact or logdp)"))),
        }
    }
}

/// `S(n)` against both estimates. Ratios are `exp2` of the `log2` differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub n: u64,
    pub s_log2: f64,
    pub estimate_log2: f64,
    pub refined_log2: f64,
    pub ratio_conjecture: f64,
    pub ratio_refined: f64,
    pub source: Source,
}

impl RatioRecord {
    pub fn from_value(n: u64, s: &ExtendedFloat, source: Source) -> Result<Self> {
        let s_log2 = s.log2();
        let estimate_log2 = conjecture_estimate(n)?.log2();
        let refined_log2 = refined_estimate(n)?.log2();
        Ok(RatioRecord {
            n,
            s_log2,
            estimate_log2,
            refined_log2,
            ratio_conjecture: (s_log2 - estimate_log2).exp2(),
            ratio_refined: (s_log2 - refined_log2).exp2(),
            source,
        })
    }
}

/// `S(n)` from the requested source.
pub fn middle_value(n: u64, source: Source, precision_bits: u32) -> Result<ExtendedFloat> {
    match source {
        Source::Exact => {
            if n > DEFAULT_LIMIT {
                return Err(Error::OrderOutOfRange { n, limit: DEFAULT_LIMIT });
            }
            Ok(ExtendedFloat::from_biguint(&middle_coefficient(n)?))
        }
        Source::Logdp => middle_coefficient_log2(n, precision_bits),
    }
}

/// One [`RatioRecord`] per entry of `n_values`, in order. Every `n` is
/// validated before any work starts.
pub fn ratio_table(n_values: &[u64], source: Source, precision_bits: u32) -> Result<Vec<RatioRecord>> {
    for &n in n_values {
        middle_index(n)?;
        if source == Source::Exact && n > DEFAULT_LIMIT {
            return Err(Error::OrderOutOfRange { n, limit: DEFAULT_LIMIT });
        }
    }
    n_values
        .iter()
        .map(|&n| RatioRecord::from_value(n, &middle_value(n, source, precision_bits)?, source))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn estimates() {
        assert_relative_eq!(conjecture_estimate(3).unwrap().to_f64(), 2.12769, max_relative = 1e-5);
        assert_relative_eq!(conjecture_estimate(8).unwrap().to_f64(), 15.6353, max_relative = 1e-5);
        assert_relative_eq!(conjecture_estimate(100).unwrap().log2(), 90.50094890096233, epsilon = 1e-12);
        assert_relative_eq!(refined_estimate(8).unwrap().to_f64(), 14.3009, max_relative = 1e-5);
        assert_relative_eq!(refined_estimate(3).unwrap().to_f64(), 1.70594894898338, max_relative = 1e-13);
        assert_relative_eq!(refined_estimate(1).unwrap().to_f64(), 1.59577, max_relative = 1e-5);
        assert!(conjecture_estimate(100).unwrap().error_bound() <= 2f64.powi(-50));
        assert!(conjecture_estimate(0).is_err());
    }

    #[test]
    fn estimate_quotient_identity() {
        for n in [1u64, 3, 8, 99, 3199] {
            let q = conjecture_estimate(n).unwrap().div(&refined_estimate(n).unwrap()).unwrap();
            let nf = n as f64;
            let want = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / (2.0 * nf * nf * nf)).sqrt();
            assert_relative_eq!(q.to_f64(), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn gaussian() {
        assert_eq!(gaussian_integral(std::f64::consts::PI).unwrap(), 1.0);
        assert_relative_eq!(gaussian_integral(1.0).unwrap(), 1.772454, max_relative = 1e-6);
        assert_relative_eq!(gaussian_integral(gaussian_exponent(8)).unwrap(), 0.175499, max_relative = 1e-5);
        assert!(gaussian_integral(0.0).is_err());
        assert!(gaussian_integral(-1.0).is_err());
    }

    #[test]
    fn truncated() {
        assert!((truncated_gaussian_ratio(1.0, -10.0, 10.0).unwrap() - 1.0).abs() <= 1e-15);
        assert_relative_eq!(truncated_gaussian_ratio(1.0, -1.0, 1.0).unwrap(), 0.8427008, max_relative = 1e-7);
        assert_relative_eq!(truncated_gaussian_ratio(4.0, -1.0, 1.0).unwrap(), 0.9953223, max_relative = 1e-7);
        assert!(truncated_gaussian_ratio(1.0, 0.5, 1.0).is_err());
        assert!(truncated_gaussian_ratio(1.0, -1.0, 0.0).is_err());
        let d = truncated_gaussian_log_deficit(1.0, -1.0, 1.0).unwrap();
        assert_relative_eq!(d.exp(), 1.0 - 0.8427007929497149, max_relative = 1e-13);
    }

    #[test]
    fn window() {
        assert_relative_eq!(laplace_window(100, 0.1).unwrap(), 1.58489e-3, max_relative = 1e-5);
        assert_eq!(laplace_window(1, 0.2).unwrap(), 1.0);
        assert!(laplace_window(16, 0.25).is_err());
        assert!(laplace_window(16, 0.0).is_err());
    }

    #[test]
    fn table() {
        let t = ratio_table(&[3, 8], Source::Exact, 64).unwrap();
        assert_relative_eq!(t[0].ratio_conjecture, 0.93999, max_relative = 1e-5);
        assert_relative_eq!(t[1].ratio_conjecture, 0.89541, max_relative = 1e-5);
        assert_relative_eq!(t[1].ratio_refined, 0.97896, max_relative = 1e-5);
        assert_eq!(ratio_table(&[3, 5], Source::Exact, 64), Err(Error::NoMiddleTerm { n: 5 }));
        let l = ratio_table(&[8], Source::Logdp, 64).unwrap();
        assert_relative_eq!(l[0].ratio_refined, t[1].ratio_refined, max_relative = 1e-14);
        assert_eq!("logdp".parse::<Source>().unwrap(), Source::Logdp);
        assert_eq!(Source::Exact.to_string(), "exact");
        assert!("float".parse::<Source>().is_err());
    }
}
