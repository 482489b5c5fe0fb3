//! Euler products over primes for the density of a multiplicative support.
//!
//! For multiplicative `ν`,
//! `d(supp ν) = Π_p (1 - 1/p) Σ_{k >= 0, p^k ∈ supp ν} p^{-k}`.
//! Every factor lies in `(0, 1]`, so truncating at a prime cutoff `P` gives an
//! upper bound; the omitted factors are controlled by a bound on the sum of
//! their absolute logarithms.

use crate::arith::{MultiplicativeSpec, PrimeTail};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sieve::SpfSieve;

/// `6/π²`, the density of the squarefree integers.
pub const SIX_OVER_PI_SQUARED: f64 = 0.607_927_101_854_026_6;

/// Relative size below which the per-prime geometric series is cut.
pub const SERIES_CUTOFF: f64 = 1e-15;

/// A truncated Euler product. The exact product lies in
/// `[value · exp(-tail_log_bound), value]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerProductResult {
    pub value: f64,
    pub prime_cutoff: u64,
    /// Bound on `Σ |log factor|` over everything left out.
    pub tail_log_bound: f64,
    pub factors_omitted_reason: String,
}

impl EulerProductResult {
    pub fn lower_bound(&self) -> f64 {
        self.value * (-self.tail_log_bound).exp()
    }

    pub fn upper_bound(&self) -> f64 {
        self.value
    }
}

/// Primes `p <= cutoff` with `ν(p) = 0`, checked against the declared tail.
fn unsupported_primes<V: Scalar>(
    spec: &MultiplicativeSpec<V>,
    primes: &[u32],
    tail: &PrimeTail,
) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for &p in primes {
        let p = u64::from(p);
        if !spec.supported_at(p, 1)? {
            out.push(p);
        }
    }
    match tail {
        PrimeTail::Finite(listed) => {
            if let Some(p) = out.iter().find(|p| !listed.contains(p)) {
                return Err(Error::Spec(format!(
                    "`{}` vanishes at the prime {p}, which its declared unsupported-prime list omits",
                    spec.name()
                )));
            }
        }
        PrimeTail::ReciprocalSum(bound) => {
            let seen: f64 = out.iter().map(|&p| 1.0 / p as f64).sum();
            if seen > *bound {
                return Err(Error::Spec(format!(
                    "`{}`: unsupported primes up to the cutoff already sum to {seen} > declared {bound}",
                    spec.name()
                )));
            }
        }
        PrimeTail::Divergent => {}
    }
    Ok(out)
}

fn declared_tail<V: Scalar>(spec: &MultiplicativeSpec<V>) -> Result<&PrimeTail> {
    spec.prime_tail().ok_or_else(|| {
        Error::UnknownTail(format!(
            "`{}` does not declare how its unsupported primes behave beyond the cutoff",
            spec.name()
        ))
    })
}

fn primes_up_to(cutoff: u64) -> Result<std::sync::Arc<SpfSieve>> {
    let limit = usize::try_from(cutoff)
        .ok()
        .filter(|&l| l < u32::MAX as usize)
        .ok_or_else(|| Error::Complexity(format!("prime cutoff {cutoff} is too large")))?;
    Ok(SpfSieve::shared(limit.max(2)))
}

/// `Σ_{p > cutoff} -log(1 - 1/p²)`, bounded by `Σ 1/(m² - 1)` over `m = 2`
/// and odd `m > cutoff`, which telescopes.
fn supported_tail_bound(cutoff: u64) -> f64 {
    let first_odd = if cutoff % 2 == 0 { cutoff + 1 } else { cutoff + 2 };
    let first_odd = first_odd.max(3);
    let odd_part = 1.0 / (2.0 * (first_odd - 1) as f64);
    if cutoff < 2 {
        odd_part + 1.0 / 3.0
    } else {
        odd_part
    }
}

/// Truncated Euler product for `d(supp ν)`.
pub fn euler_product_support_density<V: Scalar>(
    spec: &MultiplicativeSpec<V>,
    prime_cutoff: u64,
) -> Result<EulerProductResult> {
    let tail = declared_tail(spec)?;
    if *tail == PrimeTail::Divergent {
        return Ok(EulerProductResult {
            value: 0.0,
            prime_cutoff,
            tail_log_bound: 0.0,
            factors_omitted_reason: "sum of 1/p over unsupported primes diverges: density is 0"
                .into(),
        });
    }
    let sieve = primes_up_to(prime_cutoff)?;
    let primes = sieve.primes_up_to(prime_cutoff as usize);
    let unsupported = unsupported_primes(spec, primes, tail)?;

    let mut value = 1.0f64;
    let mut series_slack = 0.0f64;
    for &p in primes {
        let p = u64::from(p);
        let inv_p = 1.0 / p as f64;
        let mut sum = 1.0f64;
        let mut term = 1.0f64;
        let mut k = 1u32;
        loop {
            term *= inv_p;
            let remaining = term / (1.0 - inv_p);
            if remaining < SERIES_CUTOFF * sum {
                series_slack += remaining / sum;
                break;
            }
            if spec.supported_at(p, k)? {
                sum += term;
            }
            k += 1;
        }
        value *= (1.0 - inv_p) * sum;
    }

    let mut tail_log_bound = series_slack + supported_tail_bound(prime_cutoff);
    let reason = match tail {
        PrimeTail::Finite(listed) => {
            let beyond: Vec<u64> = listed.iter().copied().filter(|&p| p > prime_cutoff).collect();
            tail_log_bound += beyond.iter().map(|&p| -(1.0 - 1.0 / p as f64).ln()).sum::<f64>();
            format!(
                "primes > {prime_cutoff}: supported ones bounded by sum 1/(m^2-1) over odd m; \
                 {} declared unsupported primes beyond the cutoff",
                beyond.len()
            )
        }
        PrimeTail::ReciprocalSum(bound) => {
            let seen: f64 = unsupported.iter().map(|&p| 1.0 / p as f64).sum();
            let rest = (bound - seen).max(0.0);
            let scale = (prime_cutoff + 1) as f64 / prime_cutoff.max(1) as f64;
            tail_log_bound += rest * scale;
            format!(
                "primes > {prime_cutoff}: supported ones bounded by sum 1/(m^2-1) over odd m; \
                 unsupported ones by the declared remaining 1/p mass {rest:e}"
            )
        }
        PrimeTail::Divergent => unreachable!("handled above"),
    };

    Ok(EulerProductResult {
        value,
        prime_cutoff,
        tail_log_bound,
        factors_omitted_reason: reason,
    })
}

/// Partial sums of `Σ_{p <= x, ν(p) = 0} 1/p` at each checkpoint `x <= cutoff`.
pub fn support_prime_deficiency<V: Scalar>(
    spec: &MultiplicativeSpec<V>,
    prime_cutoff: u64,
    checkpoints: &[u64],
) -> Result<Vec<(u64, f64)>> {
    let xs = super::empirical::normalize_checkpoints(prime_cutoff, checkpoints)?;
    let sieve = primes_up_to(prime_cutoff)?;
    let primes = sieve.primes_up_to(prime_cutoff as usize);
    let mut out = Vec::with_capacity(xs.len());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut idx = 0;
    for x in xs {
        while idx < primes.len() && u64::from(primes[idx]) <= x {
            let p = u64::from(primes[idx]);
            if !spec.supported_at(p, 1)? {
                neumaier_add(&mut sum, &mut comp, 1.0 / p as f64);
            }
            idx += 1;
        }
        out.push((x, sum + comp));
    }
    Ok(out)
}

pub(crate) fn neumaier_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// `C_ν = (6/π²) Π_{p ∉ supp ν} (1 + 1/p)^{-1}`, truncated at the cutoff.
pub fn c_nu_constant<V: Scalar>(
    spec: &MultiplicativeSpec<V>,
    prime_cutoff: u64,
) -> Result<EulerProductResult> {
    let tail = declared_tail(spec)?;
    if *tail == PrimeTail::Divergent {
        return Err(Error::DegenerateConstant(format!(
            "`{}` has a divergent sum of 1/p over unsupported primes, so d(supp) = 0 and C = 0",
            spec.name()
        )));
    }
    let sieve = primes_up_to(prime_cutoff)?;
    let primes = sieve.primes_up_to(prime_cutoff as usize);
    let unsupported = unsupported_primes(spec, primes, tail)?;
    let value = unsupported
        .iter()
        .fold(SIX_OVER_PI_SQUARED, |acc, &p| acc / (1.0 + 1.0 / p as f64));

    let (tail_log_bound, reason) = match tail {
        PrimeTail::Finite(listed) => {
            let beyond: Vec<u64> = listed.iter().copied().filter(|&p| p > prime_cutoff).collect();
            let t = beyond.iter().fold(0.0, |acc, &p| acc + (1.0 / p as f64).ln_1p());
            (t, format!("{} declared unsupported primes beyond {prime_cutoff}", beyond.len()))
        }
        PrimeTail::ReciprocalSum(bound) => {
            let seen: f64 = unsupported.iter().map(|&p| 1.0 / p as f64).sum();
            let rest = (bound - seen).max(0.0);
            (rest, format!("declared remaining 1/p mass {rest:e} beyond {prime_cutoff}"))
        }
        PrimeTail::Divergent => unreachable!("handled above"),
    };
    Ok(EulerProductResult {
        value,
        prime_cutoff,
        tail_log_bound,
        factors_omitted_reason: reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::builtins;
    use crate::rational::Rational;

    fn no_two() -> MultiplicativeSpec<Rational> {
        MultiplicativeSpec::from_fn("mu_without_2", |p, k| {
            Rational::from_integer(if p == 2 || k > 1 { 0 } else { -1 })
        })
        .with_prime_tail(PrimeTail::Finite(vec![2]))
    }

    #[test]
    fn mobius_product_near_six_over_pi_squared() {
        let r = euler_product_support_density(&builtins::mobius::<Rational>(), 100_000).unwrap();
        assert!((r.value - SIX_OVER_PI_SQUARED).abs() < 1e-4);
        assert!(r.value >= SIX_OVER_PI_SQUARED);
        assert!(r.lower_bound() <= SIX_OVER_PI_SQUARED);
    }

    #[test]
    fn full_support_is_one() {
        let r = euler_product_support_density(&builtins::one::<Rational>(), 10_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_shrinks_with_cutoff() {
        let mu = builtins::mobius::<Rational>();
        let a = euler_product_support_density(&mu, 1_000).unwrap();
        let b = euler_product_support_density(&mu, 10_000).unwrap();
        assert!(b.tail_log_bound < a.tail_log_bound);
        assert!(b.value < a.value);
    }

    #[test]
    fn missing_two() {
        let r = euler_product_support_density(&no_two(), 100_000).unwrap();
        assert!((r.value - 4.0 / std::f64::consts::PI.powi(2)).abs() < 1e-4);
        let c = c_nu_constant(&no_two(), 1000).unwrap();
        assert!((c.value - 4.0 / std::f64::consts::PI.powi(2)).abs() < 1e-15);
        assert_eq!(c.tail_log_bound, 0.0);
    }

    #[test]
    fn undeclared_tail_refused() {
        let spec = MultiplicativeSpec::<Rational>::from_fn("x", |_, _| Rational::one());
        assert!(matches!(euler_product_support_density(&spec, 100), Err(Error::UnknownTail(_))));
        assert!(matches!(c_nu_constant(&spec, 100), Err(Error::UnknownTail(_))));
    }

    #[test]
    fn inconsistent_declaration_refused() {
        let spec = no_two().with_prime_tail(PrimeTail::all_supported());
        assert!(matches!(c_nu_constant(&spec, 100), Err(Error::Spec(_))));
        let spec = no_two().with_prime_tail(PrimeTail::ReciprocalSum(0.1));
        assert!(matches!(c_nu_constant(&spec, 100), Err(Error::Spec(_))));
    }

    #[test]
    fn divergent_tail() {
        let eps = builtins::epsilon::<Rational>();
        assert_eq!(euler_product_support_density(&eps, 100).unwrap().value, 0.0);
        assert!(matches!(c_nu_constant(&eps, 100), Err(Error::DegenerateConstant(_))));
    }

    #[test]
    fn deficiency_series() {
        let mu = builtins::mobius::<Rational>();
        let s = support_prime_deficiency(&mu, 1000, &[10, 100]).unwrap();
        assert!(s.iter().all(|&(_, v)| v == 0.0));
        let s = support_prime_deficiency(&no_two(), 1000, &[2, 10, 100]).unwrap();
        assert!(s.iter().all(|&(_, v)| v == 0.5));
    }
}
