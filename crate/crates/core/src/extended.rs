//! Mantissa/exponent numbers for magnitudes like `2^n n^(-3/2)` that leave
//! the `f64` range, carrying a relative error bound through every operation.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frexp, Real};

/// Relative rounding error of one correctly rounded `f64` operation.
pub const F64_ROUNDOFF: f64 = 1.1102230246251565e-16; // 2^-53

/// `mantissa * 2^exponent` with `mantissa` in `[1, 2)` (or exactly 0) and a
/// nonnegative relative error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtendedFloat {
    mantissa: f64,
    exponent: i64,
    error_bound: f64,
}

/// Composes two relative error bounds and one extra rounding: `(1+a)(1+b)(1+u) - 1`.
fn compose(a: f64, b: f64, extra: f64) -> f64 {
    // rounded upward by one ulp-sized slack so the bound is never understated
    let v = a + b + extra + a * b + (a + b) * extra + a * b * extra;
    v * (1.0 + 4.0 * F64_ROUNDOFF)
}

impl ExtendedFloat {
    pub const ZERO: Self = ExtendedFloat {
        mantissa: 0.0,
        exponent: 0,
        error_bound: 0.0,
    };

    /// Builds `value * 2^exponent` with the given relative error bound.
    pub fn new(value: f64, exponent: i64, error_bound: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::domain(format!(
                "extended float needs a finite nonnegative value, got {value}"
            )));
        }
        if !(error_bound >= 0.0) {
            return Err(Error::domain("error bound must be nonnegative"));
        }
        if value == 0.0 {
            return Ok(ExtendedFloat { error_bound, ..Self::ZERO });
        }
        let (m, e) = frexp(value);
        Ok(ExtendedFloat {
            mantissa: m,
            exponent: e + exponent,
            error_bound,
        })
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0, 0.0).expect("finite nonnegative value")
    }

    /// Rounds a scalar of any supported precision, adding the rounding to `error_bound`.
    pub fn from_real<T: Real>(value: T, exponent: i64, error_bound: f64) -> Result<Self> {
        let x = value.to_f64_lossy();
        let rounding = if T::MANTISSA_BITS > 53 { F64_ROUNDOFF } else { 0.0 };
        Self::new(x, exponent, compose(error_bound, 0.0, rounding))
    }

    /// Nearest representable value of a big integer (error bound 2^-53 unless exact).
    pub fn from_biguint(v: &BigUint) -> Self {
        let (m, e, exact) = big_mantissa(v);
        ExtendedFloat {
            mantissa: m,
            exponent: e,
            error_bound: if exact { 0.0 } else { F64_ROUNDOFF },
        }
    }

    /// `2^log2` with the rounding of the fractional part folded into `error_bound`.
    pub fn from_log2(log2: f64, error_bound: f64) -> Result<Self> {
        if !log2.is_finite() {
            return Err(Error::domain("log2 must be finite"));
        }
        let int = log2.floor();
        let frac = log2 - int;
        // exp2 is faithful; frac itself is exact
        Self::new(frac.exp2(), int as i64, compose(error_bound, 0.0, 2.0 * F64_ROUNDOFF))
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn with_error_bound(mut self, error_bound: f64) -> Self {
        self.error_bound = error_bound;
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.mantissa * other.mantissa;
        let err = compose(self.error_bound, other.error_bound, F64_ROUNDOFF);
        Self::new(p, self.exponent + other.exponent, err).expect("product of valid values")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        let q = self.mantissa / other.mantissa;
        // 1/(1-b) - 1 <= b/(1-b)
        let b = other.error_bound / (1.0 - other.error_bound).max(f64::MIN_POSITIVE);
        let err = compose(self.error_bound, b, F64_ROUNDOFF);
        Self::new(q, self.exponent - other.exponent, err)
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        ExtendedFloat { exponent: self.exponent + e, ..*self }
    }

    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let (m, e) = if self.exponent % 2 == 0 {
            (self.mantissa, self.exponent)
        } else {
            (self.mantissa * 2.0, self.exponent - 1)
        };
        // sqrt halves the incoming relative error
        let err = compose(self.error_bound / 2.0, 0.0, F64_ROUNDOFF);
        Self::new(m.sqrt(), e / 2, err).expect("sqrt of valid value")
    }

    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exponent as f64 + self.mantissa.log2()
    }

    pub fn ln(&self) -> f64 {
        self.log2() * std::f64::consts::LN_2
    }

    /// Plain `f64`; saturates to infinity or zero outside its range.
    pub fn to_f64(&self) -> f64 {
        if self.exponent > 1100 {
            return f64::INFINITY;
        }
        if self.exponent < -1200 {
            return 0.0;
        }
        let half = (self.exponent / 2) as i32;
        self.mantissa * 2f64.powi(half) * 2f64.powi(self.exponent as i32 - half)
    }

    /// `log2(self / other)` computed without leaving log space.
    pub fn log2_ratio(&self, other: &Self) -> f64 {
        (self.exponent - other.exponent) as f64 + (self.mantissa / other.mantissa).log2()
    }

    /// Signed relative difference `(self - exact) / exact`, evaluated exactly
    /// up to a final rounding to `f64`.
    pub fn relative_error_against(&self, exact: &BigUint) -> f64 {
        if exact.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        // self = M * 2^(exponent - 52) with M an integer below 2^53
        let m_int = (self.mantissa * 2f64.powi(52)) as u64;
        let shift = self.exponent - 52;
        let (lhs, rhs) = if shift >= 0 {
            (BigUint::from(m_int) << shift as u64, exact.clone())
        } else {
            (BigUint::from(m_int), exact << (-shift) as u64)
        };
        let diff = BigInt::from_biguint(Sign::Plus, lhs) - BigInt::from_biguint(Sign::Plus, rhs.clone());
        let (sign, mag) = diff.into_parts();
        if mag.is_zero() {
            return 0.0;
        }
        let (nm, ne, _) = big_mantissa(&mag);
        let (dm, de, _) = big_mantissa(&rhs);
        let r = (nm / dm) * 2f64.powi((ne - de).clamp(-1100, 1100) as i32);
        if sign == Sign::Minus {
            -r
        } else {
            r
        }
    }

    /// True when `exact` lies inside `self * [1 - eb, 1 + eb]`-style bounds,
    /// that is `|self - exact| <= error_bound * exact`.
    pub fn brackets(&self, exact: &BigUint) -> bool {
        self.relative_error_against(exact).abs() <= self.error_bound
    }
}

/// Mantissa in `[1,2)`, exponent, and whether the conversion was exact.
pub(crate) fn big_mantissa(v: &BigUint) -> (f64, i64, bool) {
    let bits = v.bits();
    if bits == 0 {
        return (0.0, 0, true);
    }
    if bits <= 64 {
        let x = v.to_u64().expect("fits in u64");
        let f = x as f64;
        let (m, e) = frexp(f);
        return (m, e, f as u128 == x as u128);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 bits");
    let sticky = v.trailing_zeros().is_some_and(|tz| tz < shift);
    // fold discarded bits into the lowest bit so rounding stays correct
    let top = top | sticky as u64;
    let f = top as f64;
    let (m, e) = frexp(f);
    let exact = !sticky && f as u128 == top as u128;
    (m, e + shift as i64, exact)
}

impl fmt::Display for ExtendedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.abs() < 1000 {
            write!(f, "{:e}", self.to_f64())
        } else {
            write!(f, "2^{:.12}", self.log2())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_on_construction() {
        let x = ExtendedFloat::exact(14.0);
        assert_eq!((x.mantissa(), x.exponent()), (1.75, 3));
        assert_eq!(x.to_f64(), 14.0);
        assert_eq!(ExtendedFloat::exact(0.0).log2(), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_magnitudes_stay_finite() {
        let x = ExtendedFloat::exact(3.0).mul_pow2(5000);
        assert!((x.log2() - (5000.0 + 3f64.log2())).abs() < 1e-12);
        assert_eq!(x.to_f64(), f64::INFINITY);
        let r = x.div(&ExtendedFloat::exact(1.5).mul_pow2(4999)).unwrap();
        assert_eq!(r.to_f64(), 4.0);
    }

    #[test]
    fn big_integer_conversion() {
        let v = BigUint::from(14u32);
        let x = ExtendedFloat::from_biguint(&v);
        assert_eq!(x.error_bound(), 0.0);
        assert_eq!(x.relative_error_against(&v), 0.0);

        let big = (BigUint::from(1u32) << 300u32) + BigUint::from(1u32);
        let y = ExtendedFloat::from_biguint(&big);
        assert_eq!(y.exponent(), 300);
        assert!(y.error_bound() > 0.0);
        let r = y.relative_error_against(&big);
        assert!(r < 0.0 && r.abs() < 1e-89, "{r}");
        assert!(y.brackets(&big));
    }

    #[test]
    fn error_bounds_compose_upward() {
        let a = ExtendedFloat::new(1.0, 0, 1e-10).unwrap();
        let b = ExtendedFloat::new(3.0, 0, 2e-10).unwrap();
        let p = a.mul(&b);
        assert!(p.error_bound() >= 3e-10);
        let s = p.sqrt();
        assert!(s.error_bound() >= 1.5e-10);
    }

    #[test]
    fn rejects_negative_values() {
        assert!(ExtendedFloat::new(-1.0, 0, 0.0).is_err());
        assert!(ExtendedFloat::new(1.0, 0, -1.0).is_err());
        assert!(ExtendedFloat::exact(1.0).div(&ExtendedFloat::ZERO).is_err());
    }
}
