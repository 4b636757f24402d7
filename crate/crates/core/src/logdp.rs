//! `S(n)` for large `n` by running the subset-sum DP in floating point.
//!
//! The row `c_0..=c_M` (`M = n(n+1)/4`) is held in a working-precision
//! scalar with one shared binary exponent. The whole row is scaled down by
//! `2^-RESCALE` whenever the running upper bound on its entries passes
//! `2^RESCALE`; scaling by a power of two is exact except for entries pushed
//! into the subnormal range.
//!
//! Error model (worst-case forward accumulation, no cancellation since every
//! operand is nonnegative):
//! * each addition returns `(a+b)(1+δ) + θ` with `|δ| <= u` and `|θ| <= η`,
//!   `η` covering subnormal loss in either word;
//! * after `n` factors every entry has relative error at most `(1+u)^n - 1`;
//! * an absolute error `θ` injected into entry `j` at step `k` reaches the
//!   middle coefficient with weight at most the number of subsets of
//!   `{k+1..n}`, i.e. `2^(n-k)`. The sum of those contributions, divided by
//!   the result, is added to the bound.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedFloat;
use crate::scalar::{Precision, Real};
use crate::spectrum::{middle_coefficients_upto, middle_index, DEFAULT_LIMIT};
use crate::with_precision;

pub const DEFAULT_PRECISION_BITS: u32 = 64;
pub const MIN_PRECISION_BITS: u32 = 32;

const RESCALE: i32 = 600;
/// Absolute rounding of one operation in the subnormal range, with slack for
/// the low word of multi-word types.
const LOG2_ETA: f64 = -1070.0;

fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// `S(n)` with a rigorous relative error bound, computed in precision `T`.
pub fn middle_coefficient_log2_with<T: Real>(n: u64) -> Result<ExtendedFloat> {
    let m = middle_index(n)? as usize;
    let mut row = vec![T::zero(); m + 1];
    row[0] = T::one();
    let mut row_exp: i64 = 0;
    let mut log2_ceiling = 0.0f64; // entries are below 2^log2_ceiling
    let mut log2_abs_err = f64::NEG_INFINITY; // in units of the final value's scale, log2
    let nf = n as f64;

    for k in 1..=n as usize {
        let top = m.min(k * (k + 1) / 2);
        let mut touched = 0usize;
        if k <= top {
            // blocks of length k are disjoint from their sources
            let mut end = top + 1;
            while end > k {
                let start = end.saturating_sub(k).max(k);
                let (lower, upper) = row.split_at_mut(start);
                let src = &lower[start - k..end - k];
                for (d, s) in upper[..end - start].iter_mut().zip(src) {
                    *d += *s;
                }
                touched += end - start;
                end = start;
            }
        }
        log2_ceiling += 1.0;
        if log2_ceiling > RESCALE as f64 {
            for v in row.iter_mut() {
                *v = v.ldexp(-RESCALE);
            }
            row_exp += RESCALE as i64;
            log2_ceiling -= RESCALE as f64;
            touched += m + 1;
        }
        if touched > 0 {
            // touched * eta * 2^row_exp * 2^(n-k)
            let term = (touched as f64).log2() + LOG2_ETA + row_exp as f64 + (nf - k as f64);
            log2_abs_err = log2_add(log2_abs_err, term);
        }
    }

    let value = row[m];
    if !(value > T::zero()) {
        return Err(Error::domain(format!("scaled DP lost the middle coefficient for n = {n}")));
    }
    let u = T::unit_roundoff();
    let gamma = (nf * u.ln_1p()).exp_m1() * (1.0 + 1e-12);
    let approx_log2 = value.to_f64_lossy().log2() + row_exp as f64;
    let abs_rel = (log2_abs_err - approx_log2).exp2();
    let rel = (gamma + abs_rel) / (1.0 - gamma - abs_rel);
    ExtendedFloat::from_real(value, row_exp, rel)
}

/// `S(n)` in scaled floating point with at least `precision_bits` significant bits.
pub fn middle_coefficient_log2(n: u64, precision_bits: u32) -> Result<ExtendedFloat> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::UnsupportedPrecision {
            bits: precision_bits,
            reason: "the scaled DP needs at least 32 bits",
        });
    }
    let prec = Precision::at_least(precision_bits)?;
    with_precision!(prec, T => middle_coefficient_log2_with::<T>(n))
}

/// One line of [`validate_against_exact`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub n: u64,
    /// `log2(approx) - log2(exact)`.
    pub log2_discrepancy: f64,
    pub error_bound: f64,
    pub pass: bool,
}

/// True when `|log2 exact - log2 approx| <= log2(1 + error_bound)`.
pub fn within_bound(approx: &ExtendedFloat, exact: &BigUint) -> (f64, bool) {
    let r = approx.relative_error_against(exact);
    let eb = approx.error_bound();
    let discrepancy = r.ln_1p() / std::f64::consts::LN_2;
    // |log2(1+r)| <= log2(1+eb)  <=>  r <= eb and 1/(1+r) <= 1+eb
    let pass = r <= eb && 1.0 / (1.0 + r) <= 1.0 + eb;
    (discrepancy, pass)
}

/// Compares the scaled DP with exact values for every valid `n <= n_max`.
pub fn validate_against_exact(n_max: u64, precision_bits: u32) -> Result<Vec<ValidationRow>> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::UnsupportedPrecision {
            bits: precision_bits,
            reason: "the scaled DP needs at least 32 bits",
        });
    }
    if n_max == 0 || n_max > DEFAULT_LIMIT {
        return Err(Error::OrderOutOfRange { n: n_max, limit: DEFAULT_LIMIT });
    }
    let exact = middle_coefficients_upto(n_max)?;
    exact
        .into_iter()
        .map(|(n, s)| {
            let approx = middle_coefficient_log2(n, precision_bits)?;
            let (log2_discrepancy, pass) = within_bound(&approx, &s);
            Ok(ValidationRow {
                n,
                log2_discrepancy,
                error_bound: approx.error_bound(),
                pass,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::middle_coefficient;

    #[test]
    fn small_values() {
        let x = middle_coefficient_log2(8, 64).unwrap();
        assert!((x.log2() - 14f64.log2()).abs() < 1e-12);
        assert!((x.log2() - 3.807355).abs() < 1e-6);
        let y = middle_coefficient_log2(3, 64).unwrap();
        assert!(y.brackets(&BigUint::from(2u32)));
        assert_eq!(y.to_f64(), 2.0);
        assert_eq!(middle_coefficient_log2(5, 64), Err(Error::NoMiddleTerm { n: 5 }));
    }

    #[test]
    fn rescaling_path_is_exercised() {
        // n = 1200 needs several row rescalings and drives small entries subnormal
        let approx = middle_coefficient_log2(1199, 53).unwrap();
        let exact = middle_coefficient(1199).unwrap();
        let (_, ok) = within_bound(&approx, &exact);
        assert!(ok, "bound {} rel {}", approx.error_bound(), approx.relative_error_against(&exact));
    }

    #[test]
    fn validation_report() {
        let rows = validate_against_exact(100, 64).unwrap();
        assert_eq!(rows.len(), 50);
        assert!(rows.iter().all(|r| r.pass));
        assert!(validate_against_exact(20, 53).unwrap().iter().all(|r| r.pass));
        assert!(matches!(
            validate_against_exact(100, 8),
            Err(Error::UnsupportedPrecision { bits: 8, .. })
        ));
    }

    #[test]
    fn bound_monotone_in_precision() {
        let lo = middle_coefficient_log2(200, 32).unwrap().error_bound();
        let mid = middle_coefficient_log2(200, 53).unwrap().error_bound();
        let hi = middle_coefficient_log2(200, 64).unwrap().error_bound();
        assert!(lo >= mid && mid >= hi);
    }
}
