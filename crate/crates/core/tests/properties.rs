use midcoef::asymptotics::{truncated_gaussian_ratio, Source};
use midcoef::cosprod::{eval_product, reduce_period};
use midcoef::datastore::{parse_bfile, write_bfile, BFileEntry, Cache, CacheRecord};
use midcoef::erf::erf;
use midcoef::spectrum::{expand, power_of_two};
use midcoef::ExtendedFloat;
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #[test]
    fn spectrum_is_symmetric_and_sums_to_power_of_two(n in 1u64..=120) {
        let s = expand(n).unwrap();
        let v = s.to_vec();
        prop_assert_eq!(v.iter().sum::<BigUint>(), power_of_two(n));
        let rev: Vec<BigUint> = v.iter().rev().cloned().collect();
        prop_assert_eq!(&v, &rev);
        prop_assert!(v.iter().all(|c| *c > BigUint::ZERO));
    }

    #[test]
    fn product_matches_naive_evaluation(n in 1u64..=60, t in -1.5f64..1.5) {
        let naive: f64 = (1..=n).map(|k| (k as f64 * t).cos()).product();
        let got = eval_product(n, t);
        if !got.is_zero() {
            prop_assert!((got.value() - naive).abs() <= 1e-12 * naive.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn period_reduction_preserves_the_product(n in 1u64..=40, t in -20.0f64..20.0) {
        let (r, s) = reduce_period(n, t);
        prop_assert!(r.abs() <= std::f64::consts::FRAC_PI_2 + 1e-15);
        let a = eval_product(n, t).value();
        let b = s as f64 * eval_product(n, r).value();
        // rounding of t - m*pi moved through |f'| <= n^2/2
        let tol = 1e-12 + 1e-15 * (n * n) as f64 * t.abs();
        prop_assert!((a - b).abs() <= tol);
        if n % 4 == 0 || n % 4 == 3 {
            prop_assert_eq!(s, 1);
        }
    }

    #[test]
    fn erf_is_odd_and_increasing(x in 0.0f64..6.0, dx in 1e-6f64..1.0) {
        prop_assert_eq!(erf(-x), -erf(x));
        prop_assert!(erf(x + dx) >= erf(x));
    }

    #[test]
    fn truncated_ratio_is_monotone(c in 0.01f64..100.0, a in -3.0f64..-0.01, b in 0.01f64..3.0, d in 0.0f64..1.0) {
        let r = truncated_gaussian_ratio(c, a, b).unwrap();
        prop_assert!(r > 0.0 && r <= 1.0);
        prop_assert!(truncated_gaussian_ratio(c, a, b + d).unwrap() >= r);
        prop_assert!(truncated_gaussian_ratio(c, a - d, b).unwrap() >= r);
    }

    #[test]
    fn bfile_round_trip(start in 0u64..1000, gaps in prop::collection::vec(1u64..50, 0..40), seed in any::<u64>()) {
        let mut idx = start;
        let mut entries = Vec::new();
        for (i, g) in gaps.iter().enumerate() {
            entries.push(BFileEntry::new(idx, BigUint::from(seed) * BigUint::from(i as u64 + 1)));
            idx += g;
        }
        let text = write_bfile(&entries).unwrap();
        prop_assert_eq!(parse_bfile(&text).unwrap(), entries);
    }
}

#[test]
fn cache_read_after_write() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    assert!(cache.load().unwrap().is_empty());
    let a = CacheRecord::exact(8, 14u32.into());
    let b = CacheRecord::approximate(400, &ExtendedFloat::from_log2(389.0123456789, 3e-15).unwrap(), 64);
    cache.store(&a).unwrap();
    cache.store(&b).unwrap();
    assert_eq!(cache.load().unwrap(), vec![a.clone(), b.clone()]);
    assert_eq!(cache.get(8, Source::Exact).unwrap(), Some(a));
    assert_eq!(cache.get(400, Source::Logdp).unwrap(), Some(b));
    assert_eq!(cache.get(8, Source::Logdp).unwrap(), None);
    cache.clear().unwrap();
    assert!(cache.load().unwrap().is_empty());
}
