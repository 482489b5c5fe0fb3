use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::table::ArithFunc;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::sieve::SpfSieve;

type RuleFn<V> = dyn Fn(u64, u32) -> std::result::Result<V, String> + Send + Sync;

/// Declared behaviour of `{p : ν(p) = 0}` beyond any finite prime cutoff.
///
/// The positivity of `d(supp ν)` depends on the whole prime sequence, so it
/// is an input, never an inference from a finite table.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimeTail {
    /// `ν(p) = 0` at most at the listed primes (possibly none).
    Finite(Vec<u64>),
    /// `Σ_{p : ν(p) = 0} 1/p <= bound`, summed over all primes.
    ReciprocalSum(f64),
    /// `Σ_{p : ν(p) = 0} 1/p` diverges.
    Divergent,
}

impl PrimeTail {
    pub fn all_supported() -> Self {
        PrimeTail::Finite(Vec::new())
    }
}

impl fmt::Display for PrimeTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeTail::Finite(ps) if ps.is_empty() => f.write_str("none"),
            PrimeTail::Finite(ps) => {
                let list: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "finite:{}", list.join("|"))
            }
            PrimeTail::ReciprocalSum(b) => write!(f, "bound:{b}"),
            PrimeTail::Divergent => f.write_str("divergent"),
        }
    }
}

/// Declared boundedness of `|ν|` over all of ℕ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Unknown,
}

/// A multiplicative arithmetic function given by its values at prime powers.
#[derive(Clone)]
pub struct MultiplicativeSpec<V = Rational> {
    name: String,
    rule: Arc<RuleFn<V>>,
    prime_tail: Option<PrimeTail>,
    boundedness: Boundedness,
}

impl<V: Scalar> fmt::Debug for MultiplicativeSpec<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeSpec")
            .field("name", &self.name)
            .field("prime_tail", &self.prime_tail)
            .field("boundedness", &self.boundedness)
            .finish_non_exhaustive()
    }
}

impl<V: Scalar> MultiplicativeSpec<V> {
    /// A spec from a fallible rule `(p, k) -> ν(p^k)`, `k >= 1`.
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(u64, u32) -> std::result::Result<V, String> + Send + Sync + 'static,
    ) -> Self {
        MultiplicativeSpec {
            name: name.into(),
            rule: Arc::new(rule),
            prime_tail: None,
            boundedness: Boundedness::Unknown,
        }
    }

    /// Infallible rule shorthand.
    pub fn from_fn(
        name: impl Into<String>,
        rule: impl Fn(u64, u32) -> V + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, move |p, k| Ok(rule(p, k)))
    }

    pub fn with_prime_tail(mut self, tail: PrimeTail) -> Self {
        self.prime_tail = Some(tail);
        self
    }

    pub fn with_boundedness(mut self, b: Boundedness) -> Self {
        self.boundedness = b;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime_tail(&self) -> Option<&PrimeTail> {
        self.prime_tail.as_ref()
    }

    pub fn boundedness(&self) -> Boundedness {
        self.boundedness
    }

    /// `ν(p^k)`; `ν(p^0) = 1`.
    pub fn at_prime_power(&self, p: u64, k: u32) -> Result<V> {
        if k == 0 {
            return Ok(V::one());
        }
        (self.rule)(p, k).map_err(|message| Error::Rule { p, k, message })
    }

    /// Whether `p^k` lies in the support, under the mode's default zero test.
    pub fn supported_at(&self, p: u64, k: u32) -> Result<bool> {
        let cutoff = V::default_zero_test().cutoff(0.0);
        Ok(!self.at_prime_power(p, k)?.is_zero_under(cutoff))
    }

    /// Direct evaluation by trial-division factorization.
    pub fn evaluate(&self, n: u64) -> Result<V> {
        assert!(n >= 1, "arithmetic functions start at n = 1");
        let mut acc = V::one();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m % p == 0 {
                let mut k = 0;
                while m % p == 0 {
                    m /= p;
                    k += 1;
                }
                acc = acc.mul(&self.at_prime_power(p, k)?);
            }
            p += 1;
        }
        if m > 1 {
            acc = acc.mul(&self.at_prime_power(m, 1)?);
        }
        Ok(acc)
    }

    /// Tabulates the function on `[1, limit]` with one pass over a cached
    /// smallest-prime-factor sieve. The rule is evaluated once per prime power.
    pub fn tabulate(&self, limit: usize) -> Result<ArithFunc<V>> {
        if limit == 0 {
            return Err(Error::Shape("tabulation limit must be >= 1".into()));
        }
        let sieve = SpfSieve::shared(limit);
        let mut values: Vec<V> = Vec::with_capacity(limit);
        values.push(V::one());
        for n in 2..=limit {
            let (p, k, pk) = sieve.leading_prime_power(n);
            let v = if pk == n {
                self.at_prime_power(p as u64, k)?
            } else {
                values[n / pk - 1].mul(&values[pk - 1])
            };
            values.push(v);
        }
        ArithFunc::from_values(values)
    }
}

impl MultiplicativeSpec<Rational> {
    /// The same rule with values converted to floating complex numbers.
    pub fn to_floating(&self) -> MultiplicativeSpec<Complex64> {
        let rule = Arc::clone(&self.rule);
        MultiplicativeSpec {
            name: self.name.clone(),
            rule: Arc::new(move |p, k| rule(p, k).map(|r| Complex64::from_rational(&r))),
            prime_tail: self.prime_tail.clone(),
            boundedness: self.boundedness,
        }
    }
}

/// Built-in multiplicative functions.
pub mod builtins {
    use super::*;

    fn spec<V: Scalar>(
        name: &str,
        tail: PrimeTail,
        bounded: Boundedness,
        rule: impl Fn(u64, u32) -> Rational + Send + Sync + 'static,
    ) -> MultiplicativeSpec<V> {
        MultiplicativeSpec::from_fn(name, move |p, k| V::from_rational(&rule(p, k)))
            .with_prime_tail(tail)
            .with_boundedness(bounded)
    }

    /// Möbius function.
    pub fn mobius<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("mu", PrimeTail::all_supported(), Boundedness::Bounded, |_, k| {
            Rational::from_integer(if k == 1 { -1 } else { 0 })
        })
    }

    /// The constant function 1.
    pub fn one<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("one", PrimeTail::all_supported(), Boundedness::Bounded, |_, _| Rational::one())
    }

    /// The convolution identity ε: zero at every prime power.
    pub fn epsilon<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("epsilon", PrimeTail::Divergent, Boundedness::Bounded, |_, _| Rational::zero())
    }

    /// `n ↦ n`.
    pub fn identity<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("id", PrimeTail::all_supported(), Boundedness::Unbounded, |p, k| {
            Rational::from_integer(p as i64).pow(k as i64).expect("nonzero base")
        })
    }

    /// `n ↦ 1/n`.
    pub fn reciprocal_identity<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("reciprocal_id", PrimeTail::all_supported(), Boundedness::Bounded, |p, k| {
            Rational::from_integer(p as i64).pow(-(k as i64)).expect("nonzero base")
        })
    }

    /// Liouville λ(n) = (-1)^Ω(n).
    pub fn liouville<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("liouville", PrimeTail::all_supported(), Boundedness::Bounded, |_, k| {
            Rational::from_integer(if k % 2 == 0 { 1 } else { -1 })
        })
    }

    /// Indicator of the squarefree integers, `|μ|`.
    pub fn squarefree_indicator<V: Scalar>() -> MultiplicativeSpec<V> {
        spec("squarefree", PrimeTail::all_supported(), Boundedness::Bounded, |_, k| {
            Rational::from_integer(if k == 1 { 1 } else { 0 })
        })
    }

    /// Indicator of the powers of `base` (a prime): `f(base^k) = 1`, zero at
    /// every other prime power.
    pub fn prime_power_indicator<V: Scalar>(base: u64) -> MultiplicativeSpec<V> {
        spec(
            &format!("powers_of_{base}"),
            PrimeTail::Divergent,
            Boundedness::Bounded,
            move |p, _| Rational::from_integer(i64::from(p == base)),
        )
    }

    /// Names accepted by [`by_name`], besides `powers_of_<p>` for a prime `p`.
    pub const NAMES: &[&str] = &[
        "mu",
        "one",
        "epsilon",
        "id",
        "reciprocal_id",
        "liouville",
        "squarefree",
    ];

    pub fn by_name<V: Scalar>(name: &str) -> Option<MultiplicativeSpec<V>> {
        Some(match name {
            "mu" | "mobius" => mobius(),
            "one" | "1" => one(),
            "epsilon" | "eps" => epsilon(),
            "id" | "identity" => identity(),
            "reciprocal_id" | "recip" => reciprocal_identity(),
            "liouville" | "lambda" => liouville(),
            "squarefree" | "abs_mu" => squarefree_indicator(),
            other => {
                let base: u64 = other.strip_prefix("powers_of_")?.parse().ok()?;
                let is_prime = base >= 2 && (2..).take_while(|d| d * d <= base).all(|d| base % d != 0);
                return is_prime.then(|| prime_power_indicator(base));
            }
        })
    }
}
