//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's kernels.

#![allow(dead_code)]

use nupair_core::Rational;

/// `(f * g)(n)` by trial-division divisor enumeration; slices are 1-indexed
/// through `v[n - 1]`.
pub fn naive_convolve(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    let n_max = f.len();
    (1..=n_max)
        .map(|n| {
            let mut acc = Rational::zero();
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    acc = acc + &f[d - 1] * &g[n / d - 1];
                    if d * d != n {
                        acc = acc + &f[n / d - 1] * &g[d - 1];
                    }
                }
                d += 1;
            }
            acc
        })
        .collect()
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

pub fn primes_up_to(x: usize) -> Vec<u64> {
    let mut composite = vec![false; x + 1];
    let mut out = Vec::new();
    for i in 2..=x {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= x {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `#{n <= x : n mod b ∉ Ω_b for every entry}`.
pub fn brute_sieve_count(entries: &[(u64, Vec<u64>)], x: u64) -> u64 {
    (1..=x)
        .filter(|n| entries.iter().all(|(b, omega)| !omega.contains(&(n % b))))
        .count() as u64
}

/// `#{n <= x : some a in the set divides n}`.
pub fn brute_multiples_count(set: &[u64], x: u64) -> u64 {
    (1..=x).filter(|n| set.iter().any(|a| n % a == 0)).count() as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `(S, T)` for every `n <= limit` by direct scanning.
pub fn naive_classes(
    f_support: &[u64],
    nu_nonzero: impl Fn(u64) -> bool,
    limit: u64,
) -> std::collections::BTreeMap<(Vec<u64>, Vec<u64>), u64> {
    let mut out = std::collections::BTreeMap::new();
    for n in 1..=limit {
        let s: Vec<u64> = f_support.iter().copied().filter(|d| n % d == 0).collect();
        if s.is_empty() {
            continue;
        }
        let t: Vec<u64> = s.iter().copied().filter(|&d| nu_nonzero(n / d)).collect();
        *out.entry((s, t)).or_insert(0) += 1;
    }
    out
}

pub fn rat(n: i64) -> Rational {
    Rational::from(n)
}
