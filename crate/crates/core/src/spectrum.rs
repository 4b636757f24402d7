//! Exact coefficients of `(1+x)(1+x^2)...(1+x^n)`.
//!
//! Coefficient `c_j` counts the subsets of `{1..n}` summing to `j`. The DP
//! multiplies in one factor at a time with `c_j += c_{j-k}` for descending
//! `j`. Because an update only reads lower indices, running it on the prefix
//! `0..=H` yields those coefficients exactly; the upper half then follows by
//! the symmetry `c_j = c_{N-j}` of the finished polynomial.
//!
//! Entries live in one flat `u64` buffer with a fixed number of limbs per
//! coefficient, so the inner loop is an allocation-free carry chain. Memory
//! is about `(N/2) * (n/8)` bytes.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest `n` accepted by default in exact mode.
pub const DEFAULT_LIMIT: u64 = 5000;

/// Degree `N = n(n+1)/2` of the product.
pub fn degree(n: u64) -> u64 {
    n * (n + 1) / 2
}

/// Middle index `n(n+1)/4`, defined only for `n ≡ 0, 3 (mod 4)`.
pub fn middle_index(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OrderOutOfRange { n, limit: DEFAULT_LIMIT });
    }
    match n % 4 {
        0 | 3 => Ok(n * (n + 1) / 4),
        _ => Err(Error::NoMiddleTerm { n }),
    }
}

pub fn has_middle_term(n: u64) -> bool {
    n > 0 && matches!(n % 4, 0 | 3)
}

fn check_order(n: u64, limit: u64) -> Result<()> {
    if n == 0 || n > limit {
        return Err(Error::OrderOutOfRange { n, limit });
    }
    Ok(())
}

/// Fixed-width multi-limb row of nonnegative integers.
struct LimbRow {
    width: usize,
    data: Vec<u64>,
}

impl LimbRow {
    fn new(len: usize, max_bits: u64) -> Self {
        let width = (max_bits as usize / 64) + 1;
        let mut data = vec![0u64; len * width];
        data[0] = 1;
        LimbRow { width, data }
    }

    fn len(&self) -> usize {
        self.data.len() / self.width
    }

    /// Multiplies the row by `(1 + x^k)`, truncated to the row length.
    fn multiply_factor(&mut self, k: usize) {
        let w = self.width;
        let len = self.len();
        if k >= len {
            return;
        }
        // entries after k factors are at most 2^k
        let active = (k / 64 + 1).min(w);
        for j in (k..len).rev() {
            let (lower, upper) = self.data.split_at_mut(j * w);
            let src = &lower[(j - k) * w..(j - k) * w + active];
            let dst = &mut upper[..active];
            let mut carry = false;
            for (d, s) in dst.iter_mut().zip(src) {
                let (v, c1) = d.overflowing_add(*s);
                let (v, c2) = v.overflowing_add(carry as u64);
                *d = v;
                carry = c1 | c2;
            }
            debug_assert!(!carry);
        }
    }

    fn get(&self, j: usize) -> BigUint {
        let limbs = &self.data[j * self.width..(j + 1) * self.width];
        let digits: Vec<u32> = limbs
            .iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect();
        BigUint::new(digits)
    }

    fn cmp_entries(&self, a: usize, b: usize) -> std::cmp::Ordering {
        let w = self.width;
        let la = &self.data[a * w..(a + 1) * w];
        let lb = &self.data[b * w..(b + 1) * w];
        la.iter().rev().cmp(lb.iter().rev())
    }
}

/// Exact coefficient list of `prod_{k=1}^{n} (1 + x^k)`.
///
/// Only `c_0..=c_{floor(N/2)}` are stored; indices above the midpoint are
/// answered through symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSpectrum {
    n: u64,
    degree: u64,
    lower_half: Vec<BigUint>,
}

impl CoefficientSpectrum {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Logical length `N + 1`.
    pub fn len(&self) -> usize {
        self.degree as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: u64) -> Option<&BigUint> {
        if j > self.degree {
            return None;
        }
        let folded = j.min(self.degree - j);
        self.lower_half.get(folded as usize)
    }

    pub fn lower_half(&self) -> &[BigUint] {
        &self.lower_half
    }

    /// All coefficients `c_0..=c_N` in order.
    pub fn iter(&self) -> impl Iterator<Item = &BigUint> + '_ {
        (0..=self.degree).map(move |j| self.get(j).expect("index in range"))
    }

    pub fn to_vec(&self) -> Vec<BigUint> {
        self.iter().cloned().collect()
    }

    /// Largest coefficient and the smallest index attaining it.
    pub fn max(&self) -> (u64, BigUint) {
        let mut best = 0usize;
        for (j, c) in self.lower_half.iter().enumerate() {
            if c > &self.lower_half[best] {
                best = j;
            }
        }
        (best as u64, self.lower_half[best].clone())
    }

    /// The coefficient of `x^{n(n+1)/4}`.
    pub fn middle(&self) -> Result<&BigUint> {
        let m = middle_index(self.n)?;
        Ok(self.get(m).expect("middle index in range"))
    }

    /// Sum of all coefficients; equals `2^n`.
    pub fn total(&self) -> BigUint {
        self.iter().sum()
    }
}

/// Exact spectrum for `1 <= n <= DEFAULT_LIMIT`.
pub fn expand(n: u64) -> Result<CoefficientSpectrum> {
    expand_with_limit(n, DEFAULT_LIMIT)
}

pub fn expand_with_limit(n: u64, limit: u64) -> Result<CoefficientSpectrum> {
    check_order(n, limit)?;
    let degree = degree(n);
    let half = degree / 2;
    let mut row = LimbRow::new(half as usize + 1, n);
    for k in 1..=n as usize {
        row.multiply_factor(k);
    }
    let lower_half = (0..=half as usize).map(|j| row.get(j)).collect();
    Ok(CoefficientSpectrum { n, degree, lower_half })
}

/// `S(n)`: the number of subsets of `{1..n}` summing to `n(n+1)/4`.
pub fn middle_coefficient(n: u64) -> Result<BigUint> {
    middle_coefficient_with_limit(n, DEFAULT_LIMIT)
}

pub fn middle_coefficient_with_limit(n: u64, limit: u64) -> Result<BigUint> {
    check_order(n, limit)?;
    let m = middle_index(n)?;
    let mut row = LimbRow::new(m as usize + 1, n);
    for k in 1..=n as usize {
        row.multiply_factor(k);
    }
    Ok(row.get(m as usize))
}

/// `S(n)` for every valid `n <= n_max`, from a single DP pass.
pub fn middle_coefficients_upto(n_max: u64) -> Result<Vec<(u64, BigUint)>> {
    check_order(n_max, DEFAULT_LIMIT)?;
    let top = n_max * (n_max + 1) / 4;
    let mut row = LimbRow::new(top as usize + 1, n_max);
    let mut out = Vec::new();
    for k in 1..=n_max {
        row.multiply_factor(k as usize);
        if has_middle_term(k) {
            out.push((k, row.get((k * (k + 1) / 4) as usize)));
        }
    }
    Ok(out)
}

pub fn max_coefficient(n: u64) -> Result<(u64, BigUint)> {
    check_order(n, DEFAULT_LIMIT)?;
    let half = degree(n) / 2;
    let mut row = LimbRow::new(half as usize + 1, n);
    for k in 1..=n as usize {
        row.multiply_factor(k);
    }
    let mut best = 0usize;
    for j in 1..row.len() {
        if row.cmp_entries(j, best).is_gt() {
            best = j;
        }
    }
    Ok((best as u64, row.get(best)))
}

/// `c_j` of the `n`-th product, resolving the upper half by symmetry.
pub fn coefficient_at(n: u64, j: u64) -> Result<BigUint> {
    check_order(n, DEFAULT_LIMIT)?;
    let deg = degree(n);
    if j > deg {
        return Err(Error::IndexOutOfRange { index: j, degree: deg });
    }
    let folded = j.min(deg - j);
    let mut row = LimbRow::new(folded as usize + 1, n);
    for k in 1..=n as usize {
        row.multiply_factor(k);
    }
    Ok(row.get(folded as usize))
}

/// Coefficients of `spectrum * (1 + x^{n+1})`, the next spectrum in full.
pub fn next_by_convolution(prev: &CoefficientSpectrum) -> Vec<BigUint> {
    let k = prev.n + 1;
    let deg = prev.degree + k;
    (0..=deg)
        .map(|j| {
            let mut c = prev.get(j).cloned().unwrap_or_default();
            if j >= k {
                if let Some(s) = prev.get(j - k) {
                    c += s;
                }
            }
            c
        })
        .collect()
}

/// `2^n` as a big integer.
pub fn power_of_two(n: u64) -> BigUint {
    BigUint::one() << n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_spectra() {
        assert_eq!(expand(1).unwrap().to_vec(), ints(&[1, 1]));
        assert_eq!(expand(3).unwrap().to_vec(), ints(&[1, 1, 1, 2, 1, 1, 1]));
        let s5 = expand(5).unwrap();
        for j in 5..=7 {
            assert_eq!(s5.get(j).unwrap(), &BigUint::from(3u32));
        }
        assert_eq!(s5.total(), BigUint::from(32u32));
    }

    #[test]
    fn middle_values() {
        assert_eq!(middle_coefficient(3).unwrap(), BigUint::from(2u32));
        assert_eq!(middle_coefficient(4).unwrap(), BigUint::from(2u32));
        assert_eq!(middle_coefficient(8).unwrap(), BigUint::from(14u32));
        assert_eq!(middle_coefficient(5), Err(Error::NoMiddleTerm { n: 5 }));
        assert!(middle_coefficient(5).unwrap_err().to_string().contains("no middle term"));
    }

    #[test]
    fn max_values() {
        assert_eq!(max_coefficient(1).unwrap(), (0, BigUint::from(1u32)));
        assert_eq!(max_coefficient(5).unwrap(), (5, BigUint::from(3u32)));
        assert_eq!(max_coefficient(8).unwrap(), (18, BigUint::from(14u32)));
        assert_eq!(expand(8).unwrap().max(), (18, BigUint::from(14u32)));
    }

    #[test]
    fn coefficient_lookup() {
        assert_eq!(coefficient_at(3, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(coefficient_at(3, 3).unwrap(), BigUint::from(2u32));
        assert_eq!(coefficient_at(7, 14).unwrap(), BigUint::from(8u32));
        // upper half mirrors c_1
        assert_eq!(coefficient_at(7, 27).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn domain_errors() {
        assert_eq!(expand(0), Err(Error::OrderOutOfRange { n: 0, limit: DEFAULT_LIMIT }));
        let e = expand_with_limit(11, 10).unwrap_err();
        assert!(e.to_string().contains("1..=10"));
        assert_eq!(
            coefficient_at(3, 7),
            Err(Error::IndexOutOfRange { index: 7, degree: 6 })
        );
    }

    #[test]
    fn multi_limb_entries() {
        // 2^n exceeds one limb; the sum law still holds exactly
        let s = expand(140).unwrap();
        assert_eq!(s.total(), power_of_two(140));
        assert_eq!(s.get(0), s.get(s.degree()));
    }

    #[test]
    fn single_pass_middles_agree() {
        let all = middle_coefficients_upto(60).unwrap();
        for (n, v) in &all {
            assert_eq!(v, &middle_coefficient(*n).unwrap(), "n = {n}");
        }
        assert_eq!(all.len(), 30);
    }
}
