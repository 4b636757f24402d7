//! Error function for any [`Real`].
//!
//! Below `|x| = 3` the positive-term series
//! `erf x = (2/sqrt(pi)) e^{-x^2} sum_k 2^k x^{2k+1} / (1*3*...*(2k+1))`
//! is used (no cancellation). Above it, `erfc` comes from its continued
//! fraction evaluated with the modified Lentz method.

use crate::scalar::Real;

const SWITCH: f64 = 3.0;

pub fn erf<T: Real>(x: T) -> T {
    if x < T::zero() {
        return -erf(-x);
    }
    if x < T::of(SWITCH) {
        erf_series(x)
    } else {
        T::one() - erfc_continued_fraction(x)
    }
}

pub fn erfc<T: Real>(x: T) -> T {
    if x < T::zero() {
        return T::of(2.0) - erfc(-x);
    }
    if x < T::of(SWITCH) {
        T::one() - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `ln erfc(x)`, finite for every finite `x` (no underflow in the far tail).
pub fn ln_erfc<T: Real>(x: T) -> T {
    if x < T::of(SWITCH) {
        return erfc(x).ln();
    }
    -(x * x) - (T::pi().sqrt() * erfc_fraction_denominator(x)).ln()
}

fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let two_x2 = x2 + x2;
    let mut term = x;
    let mut sum = x;
    let eps = T::of(T::unit_roundoff() / 4.0);
    let mut k = 1i64;
    while term > eps * sum {
        term = term * two_x2 / T::of_int(2 * k + 1);
        sum += term;
        k += 1;
        if k > 500 {
            break;
        }
    }
    T::of(2.0) / T::pi().sqrt() * (-x2).exp() * sum
}

/// `erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let ex = (-(x * x)).exp();
    if ex == T::zero() {
        return T::zero();
    }
    ex / (T::pi().sqrt() * erfc_fraction_denominator(x))
}

fn erfc_fraction_denominator<T: Real>(x: T) -> T {
    let tiny = T::of(1e-300);
    let eps = T::of(T::unit_roundoff());
    // Lentz on b0 + a1/(b1 + a2/(b2 + ...)) with b_i = x, a_i = i/2
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for i in 1..2000 {
        let a = T::of_int(i) / T::of(2.0);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() < eps {
            break;
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DoubleDouble;
    use num_traits::Num;

    // references from mpmath at 40 digits
    const TABLE: [(f64, f64); 7] = [
        (0.1, 0.112_462_916_018_284_9),
        (0.5, 0.520_499_877_813_046_5),
        (1.0, 0.842_700_792_949_714_9),
        (2.0, 0.995_322_265_018_952_7),
        (2.999, 0.999_977_769_831_400_2),
        (3.0, 0.999_977_909_503_001_4),
        (4.5, 0.999_999_999_803_383_9),
    ];

    #[test]
    fn erf_matches_reference_in_f64() {
        for (x, want) in TABLE {
            let got = erf(x);
            assert!((got - want).abs() <= 1e-15, "erf({x}) = {got}, want {want}");
            assert!((erf(-x) + want).abs() <= 1e-15);
        }
        assert_eq!(erf(0.0f64), 0.0);
        assert_eq!(erf(10.0f64), 1.0);
    }

    #[test]
    fn erfc_tail_relative_accuracy() {
        let cases = [
            (3.0, "2.209049699858544137277612958232037984771e-5"),
            (5.0, "1.537459794428034850188343485383378890e-12"),
            (10.0, "2.088487583762544757000786294957788611e-45"),
        ];
        for (x, want) in cases {
            let w: f64 = want.parse().unwrap();
            let got = erfc(x);
            assert!(((got - w) / w).abs() < 1e-14, "erfc({x}) = {got}");
            let wd = DoubleDouble::from_str_radix(want, 10).unwrap();
            let gd = erfc(DoubleDouble::from_f64(x));
            assert!(Real::abs((gd - wd) / wd).to_f64_lossy() < 1e-28, "dd erfc({x})");
        }
        assert_eq!(erfc(40.0f64), 0.0);
    }

    #[test]
    fn log_tail() {
        for x in [0.5, 2.0, 3.0, 5.0, 10.0] {
            assert!((ln_erfc(x) - erfc(x).ln()).abs() < 1e-13 * erfc(x).ln().abs().max(1.0));
        }
        // erfc(40) ~ 1.48e-698
        let want = -1600.0 - (40.0 * std::f64::consts::PI.sqrt()).ln() + (1.0 - 1.0 / 3200.0f64).ln();
        assert!((ln_erfc(40.0f64) - want).abs() < 1e-6);
    }

    #[test]
    fn erf_double_double_precision() {
        let want = DoubleDouble::from_str_radix("0.8427007929497148693412206350826092592961", 10).unwrap();
        let got = erf(DoubleDouble::ONE);
        assert!(Real::abs(got - want).to_f64_lossy() < 1e-30);
    }
}
