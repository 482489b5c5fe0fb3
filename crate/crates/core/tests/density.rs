mod common;

use common::{brute_multiples_count, brute_sieve_count, is_squarefree, lcm, primes_up_to};
use nupair_core::density::{
    c_nu_constant, euler_product_support_density, multiples_density, sieved_density_exact,
    sieved_density_truncated, support_density, thinness_partial_sums, ResidueSieveSpec, SieveEntry,
    SieveLimits, SieveTail, SIX_OVER_PI_SQUARED,
};
use nupair_core::{builtins, ErrorKind, MultiplicativeSpec, PrimeTail, Rational};
use proptest::prelude::*;

fn spec_of(entries: &[(u64, Vec<u64>)]) -> ResidueSieveSpec {
    ResidueSieveSpec::new(
        entries
            .iter()
            .map(|(b, o)| SieveEntry::new(*b, o.iter().copied()).unwrap())
            .collect(),
    )
}

fn arb_entries() -> impl Strategy<Value = Vec<(u64, Vec<u64>)>> {
    prop::collection::vec(
        (2u64..=12).prop_flat_map(|b| (Just(b), prop::collection::btree_set(0..b, 0..=b as usize))),
        1..=4,
    )
    .prop_map(|v| v.into_iter().map(|(b, s)| (b, s.into_iter().collect())).collect())
}

#[test]
fn squarefree_density_from_support() {
    let sf = builtins::squarefree_indicator::<Rational>().tabulate(100_000).unwrap();
    let est = support_density(&sf.support(), 100_000, &[]).unwrap();
    let brute = (1..=100_000u64).filter(|&n| is_squarefree(n)).count() as u64;
    assert_eq!(est.count(), brute);
    assert!((est.value() - SIX_OVER_PI_SQUARED).abs() < 2e-3);
}

#[test]
fn euler_product_brackets_six_over_pi_squared() {
    let r = euler_product_support_density(&builtins::mobius::<Rational>(), 100_000).unwrap();
    assert!(r.lower_bound() <= SIX_OVER_PI_SQUARED && SIX_OVER_PI_SQUARED <= r.upper_bound());
}

#[test]
fn odd_squarefree_constant() {
    // ν supported on odd squarefree numbers: C_ν = (6/π²)·(1 + 1/2)^{-1} = 4/π².
    let nu = MultiplicativeSpec::<Rational>::from_fn("odd_mu", |p, k| {
        Rational::from(if p == 2 || k > 1 { 0 } else { -1 })
    })
    .with_prime_tail(PrimeTail::Finite(vec![2]));
    let c = c_nu_constant(&nu, 1000).unwrap();
    let four_over_pi_sq = 4.0 / std::f64::consts::PI.powi(2);
    assert!((c.value - four_over_pi_sq).abs() < 1e-15);
    let brute = (1..=1_000_000u64).filter(|&n| n % 2 == 1 && is_squarefree(n)).count();
    assert!((brute as f64 / 1e6 - four_over_pi_sq).abs() < 1e-3);
}

#[test]
fn reciprocal_prime_sum_oracle() {
    let primes = primes_up_to(10_000);
    let s: f64 = primes.iter().map(|&p| 1.0 / p as f64).sum();
    assert!((s - 2.483).abs() < 1e-3);
    let s3: f64 = primes.iter().take_while(|&&p| p <= 1000).map(|&p| 1.0 / p as f64).sum();
    assert!((s3 - 2.198).abs() < 1e-3);
}

#[test]
fn truncation_certificate_brackets_brute_force() {
    // Remove the even numbers and the multiples of 9, 25, 49, ...: entry i
    // removes density 1/p², and Σ_{p > 7} 1/p² < 1/10.
    let mut entries = vec![SieveEntry::new(2, [0]).unwrap()];
    let mut constants = vec![0.5];
    for p in [3u64, 5, 7, 11, 13] {
        entries.push(SieveEntry::new(p * p, [0]).unwrap());
        constants.push(1.0 / (p * p) as f64);
    }
    let spec = ResidueSieveSpec::new(entries)
        .with_tail(SieveTail { constants, beyond: 1.0 / 13.0 })
        .unwrap();
    let x = 2_000_000u64;
    let odd_primes: Vec<u64> = primes_up_to(1414).into_iter().skip(1).collect();
    let brute = (1..=x)
        .filter(|&n| n % 2 == 1 && odd_primes.iter().all(|&p| n % (p * p) != 0))
        .count() as f64
        / x as f64;
    for k in 1..=spec.entries().len() {
        let t = sieved_density_truncated(&spec, k, &SieveLimits::default()).unwrap();
        assert!(t.lower() - 1e-4 <= brute && brute <= t.upper() + 1e-4, "k = {k}");
    }
}

#[test]
fn caps_are_complexity_errors() {
    let many: Vec<SieveEntry> = (2..=30).map(|b| SieveEntry::new(b, [1]).unwrap()).collect();
    let err = sieved_density_exact(&ResidueSieveSpec::new(many), &SieveLimits::default()).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Complexity);
}

#[test]
fn thinness_sum_of_squarefree_grows_like_log() {
    let sf = builtins::squarefree_indicator::<Rational>().tabulate(1_000_000).unwrap();
    let sums = thinness_partial_sums(&sf.support(), 1_000_000, &[1000]).unwrap();
    let growth = sums[1].1 - sums[0].1;
    let expect = SIX_OVER_PI_SQUARED * 1000f64.ln();
    assert!((growth - expect).abs() < 0.01, "{growth} vs {expect}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sieve_density_exact_over_one_period(entries in arb_entries()) {
        let period = entries.iter().fold(1, |l, (b, _)| lcm(l, *b));
        let d = sieved_density_exact(&spec_of(&entries), &SieveLimits::default()).unwrap();
        let count = brute_sieve_count(&entries, period * 3);
        prop_assert_eq!(d * Rational::from(3 * period as i64), Rational::from(count as i64));
    }

    #[test]
    fn multiples_is_complement_of_zero_residue_sieve(set in prop::collection::btree_set(1u64..40, 0..6)) {
        let set: Vec<u64> = set.into_iter().collect();
        let m = multiples_density(&set, &SieveLimits::default()).unwrap();
        let entries: Vec<(u64, Vec<u64>)> = set.iter().map(|&a| (a, vec![0])).collect();
        let s = sieved_density_exact(&spec_of(&entries), &SieveLimits::default()).unwrap();
        prop_assert_eq!(m + s, Rational::one());
    }

    #[test]
    fn multiples_density_exact_and_monotone(set in prop::collection::btree_set(1u64..30, 1..5), extra in 1u64..30) {
        let set: Vec<u64> = set.into_iter().collect();
        let d = multiples_density(&set, &SieveLimits::default()).unwrap();
        let period = set.iter().fold(1, |l, a| lcm(l, *a));
        prop_assert_eq!(&d * &Rational::from(period as i64), Rational::from(brute_multiples_count(&set, period) as i64));
        let mut bigger = set.clone();
        bigger.push(extra);
        prop_assert!(multiples_density(&bigger, &SieveLimits::default()).unwrap() >= d);
    }
}
