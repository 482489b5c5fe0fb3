//! Decomposition of `[1, N]` by which elements of `supp f` divide `n` and
//! which of those leave a cofactor in `supp ν`.
//!
//! For each `n`, `S(n) = {d ∈ supp f : d | n}` and
//! `T(n) = {d ∈ S(n) : ν(n/d) ≠ 0}`. Since `g(n) = Σ_{d ∈ T(n)} f(d) ν(n/d)`,
//! `g(n)` can only be nonzero when `T(n)` is nonempty, and when `T(n) = {d}`
//! it is certainly nonzero.

use std::collections::HashMap;

use crate::arith::Support;
use crate::density::empirical::normalize_checkpoints;
use crate::error::{Error, Result};
use crate::pairs::pair::NuPair;
use crate::scalar::Scalar;
use crate::sieve::SpfSieve;

/// Supports with at most this many elements are scanned directly per `n`;
/// larger ones go through divisor enumeration.
const DIRECT_SCAN_MAX: usize = 64;

/// One `(S, T)` class with its member counts at the checkpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportClass {
    /// `S`, ascending.
    pub divisors: Vec<u64>,
    /// `T ⊆ S`, ascending.
    pub witnesses: Vec<u64>,
    pub counts: Vec<u64>,
}

impl SupportClass {
    pub fn densities(&self, checkpoints: &[u64]) -> Vec<f64> {
        checkpoints
            .iter()
            .zip(&self.counts)
            .map(|(&x, &c)| c as f64 / x as f64)
            .collect()
    }

    /// `S|T` with `;`-separated members, e.g. `1;2|1`.
    pub fn label(&self) -> String {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
        format!("{}|{}", join(&self.divisors), join(&self.witnesses))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub checkpoints: Vec<u64>,
    /// Sorted by `(S, T)`.
    pub classes: Vec<SupportClass>,
    /// Counts of `n` with `S(n) = ∅` at each checkpoint.
    pub unclassified: Vec<u64>,
}

impl ClassDecomposition {
    pub fn class(&self, divisors: &[u64], witnesses: &[u64]) -> Option<&SupportClass> {
        self.classes
            .iter()
            .find(|c| c.divisors == divisors && c.witnesses == witnesses)
    }
}

/// Walks `[1, N]` once and groups every `n` with nonempty `S(n)` by `(S, T)`.
/// Classes appear only when observed.
pub fn classify_support<V: Scalar>(pair: &NuPair<V>, checkpoints: &[u64]) -> Result<ClassDecomposition> {
    let limit = pair.limit();
    let xs = normalize_checkpoints(limit as u64, checkpoints)?;
    let f_support = pair.f().support();
    let nu_support = pair.nu().support();
    let members: Vec<usize> = f_support.members().collect();
    let sieve = (members.len() > DIRECT_SCAN_MAX).then(|| SpfSieve::shared(limit));

    // Key layout: [|S|, S..., T...].
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut keys: Vec<Vec<u64>> = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    let mut snapshots: Vec<Vec<u64>> = Vec::new();
    let mut unclassified_now = 0u64;
    let mut unclassified = Vec::with_capacity(xs.len());
    let mut next_cp = 0usize;

    let mut s: Vec<u64> = Vec::new();
    let mut key: Vec<u64> = Vec::new();
    for n in 1..=limit {
        s.clear();
        match &sieve {
            None => s.extend(members.iter().filter(|&&d| n % d == 0).map(|&d| d as u64)),
            Some(sv) => s.extend(
                sv.divisors(n)
                    .into_iter()
                    .filter(|&d| f_support.contains(d))
                    .map(|d| d as u64),
            ),
        }
        if s.is_empty() {
            unclassified_now += 1;
        } else {
            key.clear();
            key.push(s.len() as u64);
            key.extend_from_slice(&s);
            key.extend(s.iter().filter(|&&d| nu_support.contains(n / d as usize)));
            let idx = match index.get(key.as_slice()) {
                Some(&i) => i,
                None => {
                    let i = keys.len();
                    index.insert(key.clone(), i);
                    keys.push(key.clone());
                    current.push(0);
                    snapshots.push(vec![0; next_cp]);
                    i
                }
            };
            current[idx] += 1;
        }
        if next_cp < xs.len() && xs[next_cp] == n as u64 {
            for (snap, &c) in snapshots.iter_mut().zip(&current) {
                snap.push(c);
            }
            unclassified.push(unclassified_now);
            next_cp += 1;
        }
    }

    let mut classes: Vec<SupportClass> = keys
        .into_iter()
        .zip(snapshots)
        .map(|(k, counts)| {
            let size = k[0] as usize;
            SupportClass {
                divisors: k[1..=size].to_vec(),
                witnesses: k[size + 1..].to_vec(),
                counts,
            }
        })
        .collect();
    classes.sort_by(|a, b| (&a.divisors, &a.witnesses).cmp(&(&b.divisors, &b.witnesses)));
    Ok(ClassDecomposition { checkpoints: xs, classes, unclassified })
}

/// `{n <= x : S(n) = {d}, ν(n/d) ≠ 0}` for `d = min supp f`. On this set
/// `g(n) = f(d) ν(n/d)`, so it lies inside `supp g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleDivisorWitness {
    pub d: u64,
    pub x: u64,
    pub members: u64,
    pub density: f64,
    /// First member with `g(n) = 0`, which would contradict the construction.
    pub first_violation: Option<u64>,
}

impl SingleDivisorWitness {
    pub fn contained_in_supp_g(&self) -> bool {
        self.first_violation.is_none()
    }
}

pub(crate) fn single_divisor_mask(f_support: &Support, nu_support: &Support, x: usize) -> Option<(usize, Vec<bool>)> {
    let d = f_support.min().filter(|&d| d <= x)?;
    let mut blocked = vec![false; x + 1];
    for e in f_support.members().take_while(|&e| e <= x).filter(|&e| e != d) {
        for m in (e..=x).step_by(e) {
            blocked[m] = true;
        }
    }
    let mut mask = vec![false; x + 1];
    for m in 1..=x / d {
        let n = d * m;
        if !blocked[n] && nu_support.contains(m) {
            mask[n] = true;
        }
    }
    Some((d, mask))
}

pub fn single_divisor_witness<V: Scalar>(pair: &NuPair<V>, x: u64) -> Result<SingleDivisorWitness> {
    let limit = pair.limit();
    if x == 0 || x > limit as u64 {
        return Err(Error::Range { what: "witness limit", value: x, limit: limit as u64 });
    }
    let (d, mask) = single_divisor_mask(&pair.f().support(), &pair.nu().support(), x as usize)
        .ok_or_else(|| Error::Hypothesis(format!("f vanishes on [1, {x}]")))?;
    let g_support = pair.g().support();
    let mut members = 0u64;
    let mut first_violation = None;
    for n in (1..mask.len()).filter(|&n| mask[n]) {
        members += 1;
        if first_violation.is_none() && !g_support.contains(n) {
            first_violation = Some(n as u64);
        }
    }
    Ok(SingleDivisorWitness {
        d: d as u64,
        x,
        members,
        density: members as f64 / x as f64,
        first_violation,
    })
}
