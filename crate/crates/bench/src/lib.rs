//! Shared inputs for the kernel benchmarks.

use nupair_core::density::{ResidueSieveSpec, SieveEntry};
use nupair_core::pairs::{make_multiplicative_pair, NuPair};
use nupair_core::{builtins, ArithFunc, Complex64, MultiplicativeSpec, Rational, TailDeclaration};

pub const SIZES: [usize; 3] = [10_000, 100_000, 1_000_000];

pub fn mobius(limit: usize) -> ArithFunc {
    builtins::mobius::<Rational>().tabulate(limit).expect("mobius tabulates")
}

pub fn one(limit: usize) -> ArithFunc {
    ArithFunc::constant_one(limit).expect("limit >= 1")
}

pub fn mobius_floating(limit: usize) -> ArithFunc<Complex64> {
    builtins::mobius::<Complex64>().tabulate(limit).expect("mobius tabulates")
}

pub fn one_floating(limit: usize) -> ArithFunc<Complex64> {
    ArithFunc::constant_one(limit).expect("limit >= 1")
}

/// Euler's phi, a multiplicative rule with nontrivial prime-power values.
pub fn phi() -> MultiplicativeSpec {
    MultiplicativeSpec::from_fn("phi", |p, k| Rational::from_integer(((p - 1) * p.pow(k - 1)) as i64))
}

/// `k` entries `p² : 0` over the first `k` primes; the period cap allows `k <= 6`.
pub fn squarefree_sieve(k: usize) -> ResidueSieveSpec {
    const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
    let entries = PRIMES[..k]
        .iter()
        .map(|&p| SieveEntry::new(p * p, [0]).expect("valid entry"))
        .collect();
    ResidueSieveSpec::new(entries)
}

/// Residue sieve with many forbidden classes per small modulus.
pub fn dense_sieve(k: usize) -> ResidueSieveSpec {
    let entries = (0..k as u64)
        .map(|i| SieveEntry::new(3 + i, [0, 1 + i % 2]).expect("valid entry"))
        .collect();
    ResidueSieveSpec::new(entries)
}

/// `(1_{powers of 2}, 1_{powers of 2} * μ)`, the pair with the most classes.
pub fn powers_of_two_pair(limit: usize) -> NuPair {
    make_multiplicative_pair(&builtins::prime_power_indicator(2), &builtins::mobius(), limit)
        .expect("pair builds")
        .with_f_tail(TailDeclaration::Geometric(2.0))
}
