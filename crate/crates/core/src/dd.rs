//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` of two
//! `f64`s with `|lo| <= ulp(hi) / 2`, giving about 104 significant bits.
//!
//! Addition follows the accurate pair-sum algorithm (relative error below
//! `3u^2` for `u = 2^-53`); products use Dekker splitting so no FMA is needed.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::sync::OnceLock;

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const PI: Self = DoubleDouble {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const FRAC_PI_2: Self = DoubleDouble {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };
    pub const LN_2: Self = DoubleDouble {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    // third word of pi/2 for argument reduction
    const FRAC_PI_2_TAIL: f64 = -1.497_384_904_859_169_8e-33;

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = fast_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = fast_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// Truncated Taylor sums of sin and cos for `|r| <= pi/4`.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let inv = inv_factorials();
        let r2 = r.sqr();
        // sin: r * sum (-1)^i r^{2i} / (2i+1)!
        let mut s = DoubleDouble::ZERO;
        let mut c = DoubleDouble::ZERO;
        let terms = 15;
        for i in (0..terms).rev() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s = s * r2 + inv[2 * i + 1].mul_f64(sign);
            c = c * r2 + inv[2 * i].mul_f64(sign);
        }
        (s * r, c)
    }

    /// Reduces `x` modulo pi/2, returning the quadrant and the remainder.
    fn reduce_quadrant(self) -> (i64, Self) {
        let k = (self.hi / std::f64::consts::FRAC_PI_2).round();
        let r = self - Self::FRAC_PI_2.mul_f64(k) - Self::from_f64(Self::FRAC_PI_2_TAIL * k);
        (k as i64, r)
    }

    /// Writes `digits` significant decimal digits in scientific notation.
    pub fn to_scientific(self, digits: usize) -> String {
        if self.hi == 0.0 {
            return "0".to_string();
        }
        if !self.hi.is_finite() {
            return format!("{}", self.hi);
        }
        let neg = self.hi < 0.0;
        let mut x = Real::abs(self);
        let mut exp10 = x.hi.log10().floor() as i32;
        x /= Self::from_f64(10.0).powi(exp10);
        while x.hi >= 10.0 {
            x /= Self::from_f64(10.0);
            exp10 += 1;
        }
        while x.hi < 1.0 {
            x *= Self::from_f64(10.0);
            exp10 -= 1;
        }
        let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = x.hi.floor().clamp(0.0, 9.0);
            out.push(d as u8);
            x = (x - Self::from_f64(d)) * Self::from_f64(10.0);
        }
        // round on the extra digit
        if out[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }
        out.truncate(digits);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + out[0]) as char);
        if digits > 1 {
            s.push('.');
            for d in &out[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.push_str(&format!("e{exp10}"));
        s
    }
}

fn inv_factorials() -> &'static [DoubleDouble; 32] {
    static TABLE: OnceLock<[DoubleDouble; 32]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [DoubleDouble::ONE; 32];
        for i in 1..32 {
            t[i] = t[i - 1] / DoubleDouble::from_f64(i as f64);
        }
        t
    })
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (sh, sl) = two_sum(self.hi, b.hi);
        let (th, tl) = two_sum(self.lo, b.lo);
        let (vh, vl) = fast_two_sum(sh, sl + th);
        let (hi, lo) = fast_two_sum(vh, tl + vl);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = fast_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        DoubleDouble { hi, lo }.add_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let t = if q.hi < 0.0 { -Real::floor(-q) } else { Real::floor(q) };
        self - t * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {
        $(impl $tr for DoubleDouble {
            #[inline]
            fn $m(&mut self, b: Self) { *self = *self $op b; }
        })*
    };
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = String;

    /// Decimal strings with optional sign, fraction and exponent.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("radix {radix} not supported"));
        }
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (
                &body[..i],
                body[i + 1..].parse::<i32>().map_err(|e| e.to_string())?,
            ),
            None => (body, 0),
        };
        let ten = Self::from_f64(10.0);
        let mut acc = Self::ZERO;
        let mut frac_digits = 0i32;
        let mut seen_dot = false;
        let mut any = false;
        for ch in mant.chars() {
            match ch {
                '.' if !seen_dot => seen_dot = true,
                '0'..='9' => {
                    any = true;
                    acc = acc * ten + Self::from_f64(f64::from(ch as u8 - b'0'));
                    if seen_dot {
                        frac_digits += 1;
                    }
                }
                _ => return Err(format!("invalid character {ch:?}")),
            }
        }
        if !any {
            return Err("no digits".into());
        }
        let scale = exp - frac_digits;
        let v = if scale >= 0 {
            acc * ten.powi(scale)
        } else {
            acc / ten.powi(-scale)
        };
        Ok(if neg { -v } else { v })
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let f = Real::floor(*self);
        let hi = f.hi.to_i64()?;
        hi.checked_add(f.lo as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        let v = self.to_i64()?;
        u64::try_from(v).ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(DoubleDouble::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(DoubleDouble::new(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(DoubleDouble::from_f64(x))
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(31);
        f.write_str(&self.to_scientific(digits.max(1)))
    }
}

impl Real for DoubleDouble {
    const MANTISSA_BITS: u32 = 104;

    fn pi() -> Self {
        Self::PI
    }
    fn frac_pi_2() -> Self {
        Self::FRAC_PI_2
    }
    fn ln_2() -> Self {
        Self::LN_2
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::ZERO } else { Self::from_f64(f64::NAN) };
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let resid = (self - DoubleDouble { hi: p, lo: e }).hi;
        Self::from_f64(s).add_f64(resid / (2.0 * s))
    }

    fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Self::LN_2.mul_f64(k)).ldexp(-10);
        // s = expm1(r), then square (1+s) ten times as s <- 2s + s^2
        let inv = inv_factorials();
        let mut s = DoubleDouble::ZERO;
        for i in (1..=11).rev() {
            s = (s + inv[i]) * r;
        }
        for _ in 0..10 {
            s = s * (s + Self::from_f64(2.0));
        }
        (s + Self::ONE).ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if self.hi.is_infinite() {
            return self;
        }
        // one Newton step on exp(y) = x doubles the f64 accuracy
        let y = Self::from_f64(self.hi.ln());
        y + self * (-y).exp() - Self::ONE
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn sin_cos(self) -> (Self, Self) {
        let (k, r) = self.reduce_quadrant();
        let (s, c) = Self::sin_cos_reduced(r);
        match k.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            DoubleDouble::new(fh, self.lo.floor())
        } else {
            Self::from_f64(fh)
        }
    }

    fn round(self) -> Self {
        Real::floor(self + Self::from_f64(0.5))
    }

    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        if s.is_finite() && s != 0.0 {
            DoubleDouble { hi: self.hi * s, lo: self.lo * s }
        } else {
            // split very large shifts to avoid an intermediate over/underflow
            let half = e / 2;
            self.ldexp(half).ldexp(e - half)
        }
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
}
