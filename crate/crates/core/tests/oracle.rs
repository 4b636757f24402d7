use midcoef::spectrum::{self, expand, middle_coefficient, middle_coefficients_upto, next_by_convolution};
use num_bigint::BigUint;

/// Histogram of subset sums over all `2^n` subsets of `{1..n}`.
fn brute_force(n: u64) -> Vec<u64> {
    let deg = (n * (n + 1) / 2) as usize;
    let mut hist = vec![0u64; deg + 1];
    for mask in 0u32..(1u32 << n) {
        let mut s = 0usize;
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            s += b + 1;
            m &= m - 1;
        }
        hist[s] += 1;
    }
    hist
}

#[test]
fn expansion_equals_subset_enumeration() {
    for n in 1..=20 {
        let want: Vec<BigUint> = brute_force(n).into_iter().map(BigUint::from).collect();
        assert_eq!(expand(n).unwrap().to_vec(), want, "n = {n}");
    }
}

#[test]
fn convolution_step_agrees_with_dp() {
    let mut prev = expand(1).unwrap();
    for n in 2..=60 {
        let next = next_by_convolution(&prev);
        let direct = expand(n).unwrap();
        assert_eq!(next, direct.to_vec(), "n = {n}");
        prev = direct;
    }
}

#[test]
fn batch_middle_values_match_single_runs() {
    let batch = middle_coefficients_upto(160).unwrap();
    assert_eq!(batch.len(), 80);
    for (n, v) in batch.iter().step_by(7) {
        assert_eq!(&middle_coefficient(*n).unwrap(), v, "n = {n}");
    }
    let known = [(3u64, 2u32), (4, 2), (7, 8), (8, 14), (11, 70), (12, 124)];
    for (n, v) in known {
        assert_eq!(middle_coefficient(n).unwrap(), BigUint::from(v));
    }
}

#[test]
fn middle_is_the_largest_coefficient() {
    for n in (1..=120).filter(|&n| spectrum::has_middle_term(n)) {
        let (_, max) = spectrum::max_coefficient(n).unwrap();
        assert_eq!(max, middle_coefficient(n).unwrap(), "n = {n}");
    }
}
