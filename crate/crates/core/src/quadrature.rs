//! Panel quadrature of `∫_{-pi/2}^{pi/2} prod_{k=1}^n cos(kt) dt`.
//!
//! For `n ≡ 0, 3 (mod 4)` the integrand has period `pi`, so this integral
//! equals `pi S(n) / 2^n`. Panels are cut at every zero `(2j+1)pi/(2k)` of
//! every factor, then split further so none is wider than `pi/(2n)`. Each
//! panel gets an `m`-point and a `2m`-point Gauss–Legendre rule; the finer
//! sum is reported and the difference plus a rounding floor is the error
//! estimate.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::cosprod::eval_product;
use crate::error::{Error, Result};
use crate::extended::ExtendedFloat;
use crate::legendre::GaussLegendre;
use crate::scalar::{Precision, Real};
use crate::spectrum::middle_index;
use crate::{with_precision, DoubleDouble};

pub const DEFAULT_PRECISION_BITS: u32 = 64;
pub const DEFAULT_NODES_PER_PANEL: usize = 16;

type Frac = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub panels: usize,
    /// Significant bits of the arithmetic actually used.
    pub precision_bits: u32,
    pub nodes_per_panel: usize,
}

impl<T: Real> QuadratureResult<T> {
    /// Same result carried in double-double (lossless widening from `f64`).
    pub fn widen(&self) -> QuadratureResult<DoubleDouble> {
        let w = |x: T| {
            let hi = x.to_f64_lossy();
            let lo = (x - T::of(hi)).to_f64_lossy();
            DoubleDouble::new(hi, lo)
        };
        QuadratureResult {
            value: w(self.value),
            error_estimate: w(self.error_estimate),
            panels: self.panels,
            precision_bits: self.precision_bits,
            nodes_per_panel: self.nodes_per_panel,
        }
    }
}

/// Zeros of `cos(kt)`, `k = 1..=n`, strictly inside `(lo*pi, hi*pi)`, as
/// reduced fractions of `pi`.
fn zero_fractions(n: u64, lo: Frac, hi: Frac) -> Vec<Frac> {
    let mut set = BTreeSet::new();
    for k in 1..=n as i64 {
        let den = 2 * k;
        // odd p with lo < p/den < hi
        let p_min = (lo * den).floor().to_integer() - 1;
        let p_max = (hi * den).ceil().to_integer() + 1;
        for p in p_min..=p_max {
            if p.is_even() {
                continue;
            }
            let f = Frac::new(p, den);
            if f > lo && f < hi {
                set.insert(f);
            }
        }
    }
    set.into_iter().collect()
}

/// Panel breakpoints over `[lo*pi, hi*pi]` as fractions of `pi`.
fn panel_breaks(n: u64, lo: Frac, hi: Frac) -> Vec<Frac> {
    let mut cuts = vec![lo];
    cuts.extend(zero_fractions(n, lo, hi));
    cuts.push(hi);
    let max_width = Frac::new(1, 2 * n as i64);
    let mut out = vec![lo];
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pieces = ((b - a) / max_width).ceil().to_integer().max(1);
        for i in 1..=pieces {
            out.push(a + (b - a) * Frac::new(i, pieces));
        }
    }
    out
}

fn frac_of_f64(x: f64, what: &str) -> Result<Frac> {
    Frac::approximate_float(x / std::f64::consts::PI)
        .ok_or_else(|| Error::domain(format!("{what} is not a finite number")))
}

/// Zeros `(2j+1)pi/(2k)` of the factors of `f_n` strictly inside `(a, b)`,
/// sorted and deduplicated.
pub fn zeros_of_factors(n: u64, interval: (f64, f64)) -> Result<Vec<f64>> {
    let (a, b) = interval;
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(a < b) || a < -half_pi || b > half_pi {
        return Err(Error::domain(format!(
            "interval ({a}, {b}) must be nonempty and inside [-pi/2, pi/2]"
        )));
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    // endpoints snap to the nearest simple fraction of pi, then the open
    // interval test is exact
    let lo = if a == -half_pi { Frac::new(-1, 2) } else { frac_of_f64(a, "lower end")? };
    let hi = if b == half_pi { Frac::new(1, 2) } else { frac_of_f64(b, "upper end")? };
    let pi = std::f64::consts::PI;
    Ok(zero_fractions(n, lo, hi)
        .into_iter()
        .map(|f| f.to_f64().unwrap_or(f64::NAN) * pi)
        .filter(|&z| z > a && z < b)
        .collect())
}

/// `∫ f_n` over `[lo*pi, hi*pi]` in precision `T`.
pub fn integrate_product_on<T: Real>(
    n: u64,
    lo: Frac,
    hi: Frac,
    nodes_per_panel: usize,
) -> Result<QuadratureResult<T>> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if nodes_per_panel < 4 {
        return Err(Error::domain(format!(
            "need at least 4 nodes per panel, got {nodes_per_panel}"
        )));
    }
    if lo >= hi {
        return Err(Error::domain("empty integration interval"));
    }
    let coarse = GaussLegendre::<T>::new(nodes_per_panel)?;
    let fine = GaussLegendre::<T>::new(2 * nodes_per_panel)?;
    let breaks = panel_breaks(n, lo, hi);
    let pi = T::pi();
    let at = |f: Frac| T::of_int(*f.numer()) / T::of_int(*f.denom()) * pi;

    let u = T::of(T::unit_roundoff());
    let nf = T::of_int(n as i64);
    let mut coarse_sum = T::zero();
    let mut fine_sum = T::zero();
    let mut floor = T::zero();
    for pair in breaks.windows(2) {
        let (a, b) = (at(pair[0]), at(pair[1]));
        coarse_sum += coarse.integrate(a, b, |t| eval_product(n, t).value());
        let half = (b - a) / T::of(2.0);
        let mid = (a + b) / T::of(2.0);
        let mut panel = T::zero();
        for (x, w) in fine.nodes().iter().zip(fine.weights()) {
            let t = mid + half * *x;
            let v = eval_product(n, t);
            let f = v.value();
            panel += *w * f;
            // factor-wise rounding, the exp/log round trip, and the argument
            // rounding of each k*t propagated through a unit-bounded cofactor
            let wf = (*w * half).abs();
            let log_term = if v.is_zero() { T::zero() } else { v.log_magnitude.abs() };
            floor += wf * (f.abs() * (T::of(8.0) * nf + log_term + T::of(8.0)) + nf * nf * t.abs());
        }
        fine_sum += panel * half;
    }
    let panels = breaks.len() - 1;
    let total_nodes = T::of_int((panels * 2 * nodes_per_panel) as i64);
    floor = u * (floor + total_nodes * fine_sum.abs());
    let error_estimate = (fine_sum - coarse_sum).abs() + floor;
    Ok(QuadratureResult {
        value: fine_sum,
        error_estimate,
        panels,
        precision_bits: T::MANTISSA_BITS,
        nodes_per_panel,
    })
}

/// `∫_{-pi/2}^{pi/2} f_n(t) dt` in precision `T`.
pub fn integrate_product_with<T: Real>(n: u64, nodes_per_panel: usize) -> Result<QuadratureResult<T>> {
    integrate_product_on(n, Frac::new(-1, 2), Frac::new(1, 2), nodes_per_panel)
}

/// `∫_{-pi/2}^{pi/2} f_n(t) dt` at the requested precision, reported in double-double.
pub fn integrate_product(
    n: u64,
    precision_bits: u32,
    nodes_per_panel: usize,
) -> Result<QuadratureResult<DoubleDouble>> {
    if precision_bits < 53 {
        return Err(Error::UnsupportedPrecision {
            bits: precision_bits,
            reason: "quadrature needs at least 53 bits",
        });
    }
    let prec = Precision::at_least(precision_bits)?;
    with_precision!(prec, T => Ok(integrate_product_with::<T>(n, nodes_per_panel)?.widen()))
}

/// `S(n) = (2^n / pi) ∫_{-pi/2}^{pi/2} f_n(t) dt` with default nodes.
pub fn s_via_quadrature(n: u64, precision_bits: u32) -> Result<ExtendedFloat> {
    s_via_quadrature_with(n, precision_bits, DEFAULT_NODES_PER_PANEL)
}

pub fn s_via_quadrature_with(n: u64, precision_bits: u32, nodes_per_panel: usize) -> Result<ExtendedFloat> {
    middle_index(n)?;
    if precision_bits < 53 {
        return Err(Error::UnsupportedPrecision {
            bits: precision_bits,
            reason: "quadrature needs at least 53 bits",
        });
    }
    let prec = Precision::at_least(precision_bits)?;
    with_precision!(prec, T => {
        let r = integrate_product_with::<T>(n, nodes_per_panel)?;
        scale_to_coefficient(n, &r)
    })
}

fn scale_to_coefficient<T: Real>(n: u64, r: &QuadratureResult<T>) -> Result<ExtendedFloat> {
    if r.value <= T::zero() {
        return Err(Error::domain(format!(
            "integral for n = {n} is not positive ({}); increase nodes or precision",
            r.value
        )));
    }
    let ratio = r.value / T::pi();
    let rel = (r.error_estimate / r.value).to_f64_lossy();
    // the division by pi adds a few roundings of T
    let rel = rel + 4.0 * T::unit_roundoff();
    ExtendedFloat::from_real(ratio, n as i64, rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn factor_zeros() {
        assert!(zeros_of_factors(1, (-FRAC_PI_2, FRAC_PI_2)).unwrap().is_empty());
        let z = zeros_of_factors(2, (0.0, FRAC_PI_2)).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - PI / 4.0).abs() < 1e-15);
        let z = zeros_of_factors(3, (0.0, FRAC_PI_2)).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - PI / 6.0).abs() < 1e-15 && (z[1] - PI / 4.0).abs() < 1e-15);
        assert!(zeros_of_factors(3, (1.0, 0.5)).is_err());
        assert!(zeros_of_factors(3, (0.0, 2.0)).is_err());
    }

    #[test]
    fn panels_respect_width_cap() {
        let b = panel_breaks(10, Frac::new(-1, 2), Frac::new(1, 2));
        for w in b.windows(2) {
            assert!(w[1] - w[0] <= Frac::new(1, 20));
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn small_integrals() {
        let r = integrate_product(1, 64, 16).unwrap();
        assert!(Real::abs(r.value - DoubleDouble::from_f64(2.0)).to_f64_lossy() < 1e-28);
        let r = integrate_product(3, 64, 16).unwrap();
        let quarter_pi = DoubleDouble::PI.ldexp(-2);
        let err = Real::abs(r.value - quarter_pi);
        assert!(err <= r.error_estimate, "{err} > {}", r.error_estimate);
        assert!((r.value.to_f64_lossy() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let r = integrate_product(4, 64, 16).unwrap();
        assert!((r.value.to_f64_lossy() - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn coefficient_from_integral() {
        for (n, s) in [(3u64, 2u32), (8, 14)] {
            let x = s_via_quadrature(n, 64).unwrap();
            let exact = BigUint::from(s);
            assert!(x.relative_error_against(&exact).abs() < 1e-9);
            assert!(x.brackets(&exact));
        }
        assert_eq!(s_via_quadrature(6, 64), Err(Error::NoMiddleTerm { n: 6 }));
    }

    #[test]
    fn preconditions() {
        assert!(integrate_product(3, 32, 16).is_err());
        assert!(integrate_product(3, 64, 3).is_err());
        assert!(integrate_product(3, 200, 16).is_err());
    }
}
