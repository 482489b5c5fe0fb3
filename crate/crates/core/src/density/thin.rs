//! Partial sums `Σ_{n ∈ S, n <= x} 1/n` as a thinness diagnostic.

use crate::arith::Support;
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::empirical::normalize_checkpoints;
use super::euler::neumaier_add;

fn check_limit(support: &Support, x: u64) -> Result<()> {
    if x > support.limit() as u64 {
        return Err(Error::Range { what: "partial-sum limit", value: x, limit: support.limit() as u64 });
    }
    Ok(())
}

/// Floating partial sums with compensated summation, one per checkpoint
/// (the final one at `x`).
pub fn thinness_partial_sums(support: &Support, x: u64, checkpoints: &[u64]) -> Result<Vec<(u64, f64)>> {
    check_limit(support, x)?;
    let xs = normalize_checkpoints(x, checkpoints)?;
    let mut out = Vec::with_capacity(xs.len());
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut n = 1u64;
    for cx in xs {
        while n <= cx {
            if support.contains(n as usize) {
                neumaier_add(&mut sum, &mut comp, 1.0 / n as f64);
            }
            n += 1;
        }
        out.push((cx, sum + comp));
    }
    Ok(out)
}

/// Exact rational partial sums. Denominators grow like `lcm(S ∩ [1, x])`,
/// so this is meant for sparse sets or small `x`.
pub fn thinness_partial_sums_exact(
    support: &Support,
    x: u64,
    checkpoints: &[u64],
) -> Result<Vec<(u64, Rational)>> {
    check_limit(support, x)?;
    let xs = normalize_checkpoints(x, checkpoints)?;
    let mut out = Vec::with_capacity(xs.len());
    let mut sum = Rational::zero();
    let mut n = 1u64;
    for cx in xs {
        while n <= cx {
            if support.contains(n as usize) {
                sum += &Rational::new(1, n as i64);
            }
            n += 1;
        }
        out.push((cx, sum.clone()));
    }
    Ok(out)
}
