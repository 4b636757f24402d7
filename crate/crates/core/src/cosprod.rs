//! The cosine product `f_n(t) = cos(t) cos(2t) ... cos(nt)` and the
//! inequalities that bound it away from `t = 0`.
//!
//! `f_n` is evaluated in sign/log form so that products of thousands of
//! factors stay representable. The bound functions here are the individual
//! pieces; [`crate::bounds`] sweeps them over grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default `ε` for region classification; inside both `(0, 1/4)` and `(0, 1/6)`.
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn times(self, other: Sign) -> Sign {
        match self.as_i8() * other.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

/// `sign * e^{log_magnitude}`; `log_magnitude` is meaningless when `sign` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue<T> {
    pub sign: Sign,
    pub log_magnitude: T,
}

impl<T: Real> SignedLogValue<T> {
    pub fn zero() -> Self {
        SignedLogValue { sign: Sign::Zero, log_magnitude: T::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn value(&self) -> T {
        match self.sign {
            Sign::Zero => T::zero(),
            Sign::Positive => self.log_magnitude.exp(),
            Sign::Negative => -self.log_magnitude.exp(),
        }
    }

    pub fn abs_value(&self) -> T {
        if self.is_zero() {
            T::zero()
        } else {
            self.log_magnitude.exp()
        }
    }
}

/// Magnitude below which `|cos(kt)|` cannot be told apart from zero: the
/// rounding of the argument `kt` alone moves the cosine by this much.
fn zero_floor<T: Real>(arg: T) -> T {
    T::of(2.0 * T::unit_roundoff()) * arg.abs().max(T::one())
}

const RESCALE_BITS: i32 = 512;

/// `f_n(t)` in sign/log form.
///
/// Factors are multiplied into a running product that is rescaled by powers
/// of two, so the logarithm is taken once at the end.
pub fn eval_product<T: Real>(n: u64, t: T) -> SignedLogValue<T> {
    let mut sign = Sign::Positive;
    let mut prod = T::one();
    let mut exp2: i64 = 0;
    let tiny = T::one().ldexp(-RESCALE_BITS);
    for k in 1..=n {
        let arg = T::of_int(k as i64) * t;
        let c = arg.cos();
        if c.abs() <= zero_floor(arg) {
            return SignedLogValue::zero();
        }
        if c < T::zero() {
            sign = sign.times(Sign::Negative);
        }
        prod *= c.abs();
        if prod < tiny {
            prod = prod.ldexp(RESCALE_BITS);
            exp2 -= RESCALE_BITS as i64;
        }
    }
    let log_magnitude = prod.ln() + T::of_int(exp2) * T::ln_2();
    SignedLogValue { sign, log_magnitude }
}

/// Maps `t` into `[-pi/2, pi/2]` by whole multiples of `pi`.
///
/// Returns the reduced argument and the factor `s` with
/// `f_n(t) = s * f_n(t_reduced)`. Shifting by `pi` flips the sign of every
/// odd-`k` factor, `n(n+1)/2` sign flips per shift in total, so `s = +1`
/// whenever `n ≡ 0, 3 (mod 4)`.
pub fn reduce_period<T: Real>(n: u64, t: T) -> (T, i8) {
    let pi = T::pi();
    let mut m = (t / pi).round();
    let mut r = t - m * pi;
    let half = T::frac_pi_2();
    if r > half {
        r -= pi;
        m += T::one();
    } else if r < -half {
        r += pi;
        m -= T::one();
    }
    let shifts = m.to_i64().unwrap_or(0).unsigned_abs();
    let flips = (shifts % 2) * ((n * (n + 1) / 2) % 2);
    (r, if flips == 1 { -1 } else { 1 })
}

/// `sum_{k=1}^n cos^2(kt)` summed term by term.
pub fn direct_cos_square_sum<T: Real>(n: u64, t: T) -> T {
    (1..=n)
        .map(|k| {
            let c = (T::of_int(k as i64) * t).cos();
            c * c
        })
        .sum()
}

/// Closed form `n/2 + cos((n+1)t) sin(nt) / (2 sin t)` of the sum of squared
/// cosines; at `sin t = 0` the removable singularity takes its limit `n`.
pub fn cos_square_sum<T: Real>(n: u64, t: T) -> T {
    let nn = T::of_int(n as i64);
    let s = t.sin();
    if s == T::zero() {
        return nn;
    }
    let two = T::of(2.0);
    nn / two + (T::of_int(n as i64 + 1) * t).cos() * (nn * t).sin() / (two * s)
}

/// Arithmetic–geometric mean bound `((1/n) sum cos^2(kt))^{n/2} >= |f_n(t)|`.
pub fn amgm_bound<T: Real>(n: u64, t: T) -> T {
    let mean = direct_cos_square_sum(n, t) / T::of_int(n as i64);
    half_power(mean, n)
}

/// `x^{n/2}` for `x >= 0`.
fn half_power<T: Real>(x: T, n: u64) -> T {
    let e = i32::try_from(n / 2).expect("order fits in i32");
    let p = x.powi(e);
    if n % 2 == 1 {
        p * x.sqrt()
    } else {
        p
    }
}

/// `(1/2 + 1/(2n |sin t|))^{n/2}`, valid for `0 < |t| <= pi/2`.
pub fn sin_bound<T: Real>(n: u64, t: T) -> Result<T> {
    if t == T::zero() {
        return Err(Error::domain("sin bound diverges at t = 0"));
    }
    if t.abs() > T::frac_pi_2() {
        return Err(Error::domain(format!("sin bound needs |t| <= pi/2, got {t}")));
    }
    let two_n = T::of_int(2 * n as i64);
    let base = T::of(0.5) + T::one() / (two_n * t.sin().abs());
    Ok(half_power(base, n))
}

/// Jordan's lower bound `2|t|/pi <= |sin t|` on `|t| <= pi/2`.
pub fn jordan_lower<T: Real>(t: T) -> Result<T> {
    if t.abs() > T::frac_pi_2() {
        return Err(Error::domain(format!("Jordan bound needs |t| <= pi/2, got {t}")));
    }
    Ok(T::of(2.0) * t.abs() / T::pi())
}

/// The sine bound after replacing `|sin t|` by `2|t|/pi`:
/// `(1/2 + pi/(4n|t|))^{n/2}`, decreasing in `|t|`.
pub fn jordan_substituted_bound<T: Real>(n: u64, t: T) -> Result<T> {
    let lower = jordan_lower(t)?;
    if lower == T::zero() {
        return Err(Error::domain("bound diverges at t = 0"));
    }
    let base = T::of(0.5) + T::one() / (T::of_int(2 * n as i64) * lower);
    Ok(half_power(base, n))
}

/// `prod_{k=1}^n (1 - (kt)^2/2 + (kt)^4/24)`, an upper bound for `f_n(t)` on `|t| <= 1/n`.
pub fn case1_taylor_bound<T: Real>(n: u64, t: T) -> Result<T> {
    if n == 0 || t.abs() * T::of_int(n as i64) > T::one() {
        return Err(Error::domain(format!("Taylor bound needs |t| <= 1/n, got t = {t}, n = {n}")));
    }
    let mut acc = T::one();
    for k in 1..=n {
        let x2 = {
            let x = T::of_int(k as i64) * t;
            x * x
        };
        acc *= T::one() - x2 / T::of(2.0) + x2 * x2 / T::of(24.0);
    }
    Ok(acc)
}

/// Uniform bound `(7/16)^{n/2}` on `|f_n|` over `pi/n <= |t| <= pi/2`, for `n >= 8`.
pub fn case3_exponential_bound<T: Real>(n: u64) -> Result<T> {
    if n < 8 {
        return Err(Error::domain(format!("exponential bound needs n >= 8, got {n}")));
    }
    Ok(half_power(T::of(7.0 / 16.0), n))
}

/// `h_n = floor(n/4)`, the smaller order whose product dominates `f_n` near `pi/n`.
pub fn quarter_order(n: u64) -> u64 {
    n / 4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionTag {
    /// `|t| < n^{-(3/2-ε)}`: the Gaussian core.
    Inner,
    /// `n^{-(3/2-ε)} <= |t| <= 1/n`.
    Case1,
    /// `1/n < |t| <= pi/n`.
    Case2,
    /// `pi/n < |t| <= pi/2`.
    Case3,
}

/// Where a point falls in the split of `[-pi/2, pi/2]` used to bound `|f_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRegion {
    pub tag: RegionTag,
    pub epsilon: f64,
    /// Bounds on `|t|` for this region.
    pub lower: f64,
    pub upper: f64,
    /// `floor(n/4)`, the comparison order used in Case 2.
    pub quarter_order: Option<u64>,
}

/// Classifies `|t|` against `n^{-(3/2-ε)}`, `1/n`, `pi/n`, `pi/2`.
/// Points on a boundary belong to the lower-numbered case.
pub fn classify_region(n: u64, t: f64, epsilon: f64) -> Result<AnalysisRegion> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/4), got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let a = t.abs();
    if !(a <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!("|t| must be at most pi/2, got {t}")));
    }
    let nf = n as f64;
    let window = laplace_edge(nf, epsilon);
    let inv = 1.0 / nf;
    let pi_n = std::f64::consts::PI / nf;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let region = |tag, lower, upper| AnalysisRegion {
        tag,
        epsilon,
        lower,
        upper,
        quarter_order: (tag == RegionTag::Case2).then(|| quarter_order(n)),
    };
    Ok(if a < window {
        region(RegionTag::Inner, 0.0, window)
    } else if a <= inv {
        region(RegionTag::Case1, window, inv)
    } else if a <= pi_n {
        region(RegionTag::Case2, inv, pi_n)
    } else {
        region(RegionTag::Case3, pi_n, half_pi)
    })
}

pub(crate) fn laplace_edge(n: f64, epsilon: f64) -> f64 {
    n.powf(-(1.5 - epsilon))
}
