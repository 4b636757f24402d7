//! The real-number abstraction the numerical modules are generic over.
//!
//! [`Real`] extends the `num-traits` arithmetic traits with the handful of
//! transcendental functions and constants the cosine-product, quadrature and
//! error-function code needs. It is implemented for `f32`, `f64` and
//! [`DoubleDouble`](crate::DoubleDouble); [`Precision`] maps a requested bit
//! count onto one of them at run time.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

pub trait Real:
    Num
    + Copy
    + PartialOrd
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Significant bits carried by the type.
    const MANTISSA_BITS: u32;

    /// Worst-case relative rounding error of one addition of nonnegative operands.
    fn unit_roundoff() -> f64 {
        (-(Self::MANTISSA_BITS as f64)).exp2()
    }

    fn pi() -> Self;
    fn frac_pi_2() -> Self;
    fn ln_2() -> Self;

    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn round(self) -> Self;
    /// Multiplies by `2^e` without rounding (barring over/underflow).
    fn ldexp(self, e: i32) -> Self;
    fn is_finite(self) -> bool;

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }

    fn powi(self, mut e: i32) -> Self {
        let mut base = if e < 0 {
            e = -e;
            Self::one() / self
        } else {
            self
        };
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Lossless for values exactly representable in `f64`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Real")
    }

    fn of_int(x: i64) -> Self {
        Self::from_i64(x).expect("i64 converts to every Real")
    }

    /// Nearest `f64` (or the leading component for multi-word types).
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real_for_float {
    ($($t:ident => $bits:expr),*) => {
        $(
            impl Real for $t {
                const MANTISSA_BITS: u32 = $bits;

                fn pi() -> Self { std::$t::consts::PI }
                fn frac_pi_2() -> Self { std::$t::consts::FRAC_PI_2 }
                fn ln_2() -> Self { std::$t::consts::LN_2 }

                fn sqrt(self) -> Self { Float::sqrt(self) }
                fn exp(self) -> Self { Float::exp(self) }
                fn ln(self) -> Self { Float::ln(self) }
                fn sin(self) -> Self { Float::sin(self) }
                fn cos(self) -> Self { Float::cos(self) }
                fn sin_cos(self) -> (Self, Self) { Float::sin_cos(self) }
                fn abs(self) -> Self { Float::abs(self) }
                fn floor(self) -> Self { Float::floor(self) }
                fn round(self) -> Self { Float::round(self) }
                fn ldexp(self, e: i32) -> Self { self * (2.0 as $t).powi(e) }
                fn is_finite(self) -> bool { Float::is_finite(self) }
                fn powi(self, e: i32) -> Self { Float::powi(self, e) }
            }
        )*
    };
}

impl_real_for_float!(f32 => 24, f64 => 53);

/// Working precision selected from a requested bit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// IEEE binary64, 53 significant bits.
    Double,
    /// Unevaluated sum of two binary64 values, 104 significant bits.
    DoubleDouble,
}

impl Precision {
    pub const MAX_BITS: u32 = 104;

    /// Smallest supported type carrying at least `bits` significant bits.
    pub fn at_least(bits: u32) -> Result<Self> {
        match bits {
            0..=53 => Ok(Precision::Double),
            54..=Self::MAX_BITS => Ok(Precision::DoubleDouble),
            _ => Err(Error::UnsupportedPrecision {
                bits,
                reason: "at most 104 bits are available",
            }),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::Double => f64::MANTISSA_BITS,
            Precision::DoubleDouble => crate::DoubleDouble::MANTISSA_BITS,
        }
    }
}

/// Runs `$body` with `$t` bound to the scalar type for `$prec`.
#[macro_export]
macro_rules! with_precision {
    ($prec:expr, $t:ident => $body:expr) => {
        match $prec {
            $crate::Precision::Double => {
                type $t = f64;
                $body
            }
            $crate::Precision::DoubleDouble => {
                type $t = $crate::DoubleDouble;
                $body
            }
        }
    };
}

/// Splits a finite nonzero `f64` into a mantissa in `[1, 2)` and a binary exponent.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant_bits = (bits & !(0x7ffu64 << 52)) | (1023u64 << 52);
    (f64::from_bits(mant_bits), raw_exp - 1023)
}
