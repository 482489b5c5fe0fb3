//! Smallest-prime-factor tables.

use std::sync::{Arc, Mutex};

/// Linear sieve recording the smallest prime factor of every `n <= limit`.
#[derive(Debug)]
pub struct SpfSieve {
    limit: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

static SHARED: Mutex<Option<Arc<SpfSieve>>> = Mutex::new(None);

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "sieve limit {limit} does not fit u32");
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || p as usize > limit / i {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        if limit >= 1 {
            spf[1] = 1;
        }
        SpfSieve { limit, spf, primes }
    }

    /// A sieve covering at least `limit`, built once and reused across calls.
    pub fn shared(limit: usize) -> Arc<SpfSieve> {
        let mut slot = SHARED.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = slot.as_ref() {
            if s.limit >= limit {
                return Arc::clone(s);
            }
        }
        let s = Arc::new(SpfSieve::new(limit));
        *slot = Some(Arc::clone(&s));
        s
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Smallest prime factor of `n >= 2`.
    #[inline]
    pub fn spf(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.limit && self.spf[n] as usize == n
    }

    /// All primes up to the sieve limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn primes_up_to(&self, x: usize) -> &[u32] {
        let end = self.primes.partition_point(|&p| p as usize <= x);
        &self.primes[..end]
    }

    /// Splits `n >= 2` as `(p, k, p^k)` with `p = spf(n)` and `p^k || n`.
    #[inline]
    pub fn leading_prime_power(&self, n: usize) -> (usize, u32, usize) {
        let p = self.spf(n);
        let mut pk = p;
        let mut k = 1;
        let mut m = n / p;
        while m % p == 0 {
            m /= p;
            pk *= p;
            k += 1;
        }
        (p, k, pk)
    }

    /// Prime factorization as `(p, k)` pairs in ascending `p`.
    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let (p, k, pk) = self.leading_prime_power(n);
            out.push((p, k));
            n /= pk;
        }
        out
    }

    /// Divisors of `n`, ascending.
    pub fn divisors(&self, n: usize) -> Vec<usize> {
        let mut divs = vec![1usize];
        for (p, k) in self.factorize(n) {
            let base = divs.len();
            let mut pp = 1;
            for _ in 0..k {
                pp *= p;
                for i in 0..base {
                    divs.push(divs[i] * pp);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let s = SpfSieve::new(400);
        assert_eq!(s.primes_up_to(30), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(s.spf(25), 5);
        assert_eq!(s.factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(s.divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(s.leading_prime_power(24), (2, 3, 8));
    }

    #[test]
    fn shared_reuses_larger_sieve() {
        let big = SpfSieve::shared(1000);
        assert!(big.limit() >= 1000);
        // Other tests share the cache, so only the coverage guarantee is stable.
        let small = SpfSieve::shared(100);
        assert!(small.limit() >= 100);
        assert!(small.is_prime(97));
    }

    #[test]
    fn spf_matches_trial_division() {
        let s = SpfSieve::new(5000);
        for n in 2..=5000usize {
            let trial = (2..=n).find(|d| n % d == 0).unwrap();
            assert_eq!(s.spf(n), trial, "n = {n}");
        }
    }
}
