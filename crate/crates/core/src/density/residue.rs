//! Exact densities of residue-sieved sets and of sets of multiples.
//!
//! A sieve removes every `n` with `n mod b ∈ Ω_b` for some entry `(b, Ω_b)`.
//! The surviving set is periodic, and its density follows from
//! inclusion-exclusion: for each subset of entries, count the residues modulo
//! the lcm of its moduli that fall into every forbidden class at once.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One modulus with its forbidden residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveEntry {
    modulus: u64,
    forbidden: Vec<u64>,
}

impl SieveEntry {
    pub fn new(modulus: u64, forbidden: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Spec("sieve modulus must be >= 1".into()));
        }
        let mut forbidden: Vec<u64> = forbidden.into_iter().collect();
        if let Some(&r) = forbidden.iter().find(|&&r| r >= modulus) {
            return Err(Error::Spec(format!(
                "residue {r} is outside {{0, ..., {}}}",
                modulus - 1
            )));
        }
        forbidden.sort_unstable();
        forbidden.dedup();
        Ok(SieveEntry { modulus, forbidden })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn forbidden(&self) -> &[u64] {
        &self.forbidden
    }

    fn forbids(&self, n: u64) -> bool {
        self.forbidden.binary_search(&(n % self.modulus)).is_ok()
    }
}

/// `b,r1|r2|...`, the CSV line form.
impl fmt::Display for SieveEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let residues: Vec<String> = self.forbidden.iter().map(u64::to_string).collect();
        write!(f, "{},{}", self.modulus, residues.join("|"))
    }
}

/// Parses `b,r1|r2` or the command-line shorthand `b:r1|r2`.
impl FromStr for SieveEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (b, omega) = s
            .split_once(',')
            .or_else(|| s.split_once(':'))
            .ok_or_else(|| Error::Spec(format!("expected `b,r1|r2|...`, got `{s}`")))?;
        let modulus: u64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Spec(format!("bad modulus `{b}`")))?;
        let residues = omega
            .split('|')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| r.parse::<u64>().map_err(|_| Error::Spec(format!("bad residue `{r}`"))))
            .collect::<Result<Vec<_>>>()?;
        SieveEntry::new(modulus, residues)
    }
}

/// Declared tail for a truncated infinite sieve family.
///
/// `constants[i]` bounds the density of the set removed by entry `i`, and
/// `beyond` bounds the sum of those constants over entries not listed at all.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveTail {
    pub constants: Vec<f64>,
    pub beyond: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSieveSpec {
    entries: Vec<SieveEntry>,
    tail: Option<SieveTail>,
}

impl ResidueSieveSpec {
    pub fn new(entries: Vec<SieveEntry>) -> Self {
        ResidueSieveSpec { entries, tail: None }
    }

    pub fn with_tail(mut self, tail: SieveTail) -> Result<Self> {
        if tail.constants.len() != self.entries.len() {
            return Err(Error::Spec(format!(
                "{} tail constants for {} entries",
                tail.constants.len(),
                self.entries.len()
            )));
        }
        if let Some(c) = tail.constants.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::Spec(format!("tail constants must be positive and finite, got {c}")));
        }
        if !(tail.beyond.is_finite() && tail.beyond >= 0.0) {
            return Err(Error::Spec(format!(
                "declared tail sum must be finite and >= 0, got {}",
                tail.beyond
            )));
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn entries(&self) -> &[SieveEntry] {
        &self.entries
    }

    pub fn tail(&self) -> Option<&SieveTail> {
        self.tail.as_ref()
    }

    /// Whether `n` survives every entry.
    pub fn admits(&self, n: u64) -> bool {
        !self.entries.iter().any(|e| e.forbids(n))
    }

    /// One `b,omega_list` line per entry.
    pub fn to_csv(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    /// Reads `b,omega_list` lines; blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| {
                l.parse::<SieveEntry>()
                    .map_err(|e| Error::Spec(format!("line {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidueSieveSpec::new(entries))
    }
}

/// Caps on the exponential inclusion-exclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveLimits {
    pub max_entries: usize,
    /// Largest lcm of moduli whose residues are counted.
    pub max_period: u64,
}

impl Default for SieveLimits {
    fn default() -> Self {
        SieveLimits {
            max_entries: 20,
            max_period: 1_000_000_000,
        }
    }
}

/// Exact density of the sieved set of a finite spec.
pub fn sieved_density_exact(spec: &ResidueSieveSpec, limits: &SieveLimits) -> Result<Rational> {
    sieved_density_prefix(&spec.entries, limits)
}

fn sieved_density_prefix(entries: &[SieveEntry], limits: &SieveLimits) -> Result<Rational> {
    if entries.len() > limits.max_entries {
        return Err(Error::Complexity(format!(
            "{} sieve entries exceed the inclusion-exclusion cap of {}",
            entries.len(),
            limits.max_entries
        )));
    }
    let mut total = Rational::one();
    let mut chosen = Vec::with_capacity(entries.len());
    inclusion_exclusion(entries, 0, 1, &mut chosen, limits, &mut total)?;
    Ok(total)
}

// Depth-first over subsets in index order. A subset whose forbidden classes
// never meet contributes nothing and neither does any superset, so the whole
// branch is pruned.
fn inclusion_exclusion<'a>(
    entries: &'a [SieveEntry],
    start: usize,
    period: u64,
    chosen: &mut Vec<&'a SieveEntry>,
    limits: &SieveLimits,
    total: &mut Rational,
) -> Result<()> {
    for i in start..entries.len() {
        let e = &entries[i];
        let l = period / period.gcd(&e.modulus);
        let new_period = l
            .checked_mul(e.modulus)
            .filter(|&p| p <= limits.max_period)
            .ok_or_else(|| {
                Error::Complexity(format!(
                    "subset period lcm({period}, {}) exceeds {}",
                    e.modulus, limits.max_period
                ))
            })?;
        chosen.push(e);
        let hits = count_common_residues(chosen, new_period);
        if hits > 0 {
            let term = Rational::new(hits as i64, new_period as i64);
            if chosen.len() % 2 == 1 {
                *total -= &term;
            } else {
                *total += &term;
            }
            inclusion_exclusion(entries, i + 1, new_period, chosen, limits, total)?;
        }
        chosen.pop();
    }
    Ok(())
}

/// `#{r in [0, period) : r mod b ∈ Ω_b for every chosen entry}`.
fn count_common_residues(chosen: &[&SieveEntry], period: u64) -> u64 {
    let pivot = chosen
        .iter()
        .min_by_key(|e| (e.forbidden.len() as u128 * period as u128) / e.modulus as u128)
        .expect("nonempty subset");
    let steps = period / pivot.modulus;
    let mut hits = 0;
    for &omega in &pivot.forbidden {
        for j in 0..steps {
            let r = omega + j * pivot.modulus;
            if chosen.iter().all(|e| e.forbids(r)) {
                hits += 1;
            }
        }
    }
    hits
}

/// `d_k` for the first `k` entries with the declared tail bound; the true
/// density of the full family lies in `[d_k - tail_bound, d_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedDensity {
    pub retained: usize,
    pub density: Rational,
    pub tail_bound: f64,
}

impl TruncatedDensity {
    pub fn lower(&self) -> f64 {
        (self.density.to_f64() - self.tail_bound).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.density.to_f64()
    }
}

pub fn sieved_density_truncated(
    spec: &ResidueSieveSpec,
    k: usize,
    limits: &SieveLimits,
) -> Result<TruncatedDensity> {
    let n = spec.entries.len();
    if k > n {
        return Err(Error::Spec(format!("cannot retain {k} of {n} entries")));
    }
    let tail_bound = match (&spec.tail, k == n) {
        (Some(t), _) => t.constants[k..].iter().sum::<f64>() + t.beyond,
        (None, true) => 0.0,
        (None, false) => {
            return Err(Error::Spec(
                "truncating a sieve family requires declared tail constants".into(),
            ))
        }
    };
    Ok(TruncatedDensity {
        retained: k,
        density: sieved_density_prefix(&spec.entries[..k], limits)?,
        tail_bound,
    })
}

/// Exact density of `M(A) = {a·n : a ∈ A, n >= 1}` for finite `A`.
///
/// Elements that are multiples of smaller elements do not change `M(A)` and
/// are dropped before the entry cap is applied.
pub fn multiples_density(set: &[u64], limits: &SieveLimits) -> Result<Rational> {
    if set.contains(&0) {
        return Err(Error::Spec("sets of multiples take positive integers".into()));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut primitive: Vec<u64> = Vec::with_capacity(sorted.len());
    for a in sorted {
        if !primitive.iter().any(|&b| a % b == 0) {
            primitive.push(a);
        }
    }
    if primitive.len() > limits.max_entries {
        return Err(Error::Complexity(format!(
            "{} primitive elements exceed the inclusion-exclusion cap of {}",
            primitive.len(),
            limits.max_entries
        )));
    }
    let mut total = Rational::zero();
    multiples_terms(&primitive, 0, &BigInt::one(), 0, &mut total);
    Ok(total)
}

fn multiples_terms(set: &[u64], start: usize, lcm: &BigInt, depth: usize, total: &mut Rational) {
    for i in start..set.len() {
        let next = lcm.lcm(&BigInt::from(set[i]));
        let term = Rational::from_bigints(BigInt::one(), next.clone());
        if depth % 2 == 0 {
            *total += &term;
        } else {
            *total -= &term;
        }
        multiples_terms(set, i + 1, &next, depth + 1, total);
    }
}
