use crate::arith::Support;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::ZeroTest;

/// `A(x) = #(A ∩ [1, x])` at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    pub x: u64,
    pub count: u64,
}

impl Checkpoint {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.x as f64
    }

    pub fn exact_ratio(&self) -> Rational {
        Rational::new(self.count as i64, self.x as i64)
    }
}

/// An empirical density `A(x)/x` with the counts that led to it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    /// Checkpoints in strictly increasing `x`; the last one is at `x`.
    pub checkpoints: Vec<Checkpoint>,
    /// Zero test that defined set membership, when the set is a support.
    pub zero_test: Option<ZeroTest>,
    /// Whether membership was decided exactly.
    pub exact: bool,
}

impl DensityEstimate {
    pub fn x(&self) -> u64 {
        self.last().x
    }

    pub fn count(&self) -> u64 {
        self.last().count
    }

    pub fn value(&self) -> f64 {
        self.last().ratio()
    }

    pub fn exact_value(&self) -> Rational {
        self.last().exact_ratio()
    }

    fn last(&self) -> &Checkpoint {
        self.checkpoints.last().expect("estimate has at least one checkpoint")
    }

    /// Smallest ratio over the checkpoints, a finite proxy for the lower density.
    pub fn lower(&self) -> f64 {
        self.checkpoints.iter().map(Checkpoint::ratio).fold(f64::INFINITY, f64::min)
    }

    /// Largest ratio over the checkpoints, a finite proxy for the upper density.
    pub fn upper(&self) -> f64 {
        self.checkpoints.iter().map(Checkpoint::ratio).fold(0.0, f64::max)
    }

    pub fn at(&self, x: u64) -> Option<&Checkpoint> {
        self.checkpoints.iter().find(|c| c.x == x)
    }
}

/// Sorted, deduplicated checkpoints with `x` appended; rejects values outside `[1, x]`.
pub(crate) fn normalize_checkpoints(x: u64, checkpoints: &[u64]) -> Result<Vec<u64>> {
    if x == 0 {
        return Err(Error::Range { what: "evaluation limit", value: 0, limit: 0 });
    }
    let mut xs = Vec::with_capacity(checkpoints.len() + 1);
    for &c in checkpoints {
        if c == 0 || c > x {
            return Err(Error::Range { what: "checkpoint", value: c, limit: x });
        }
        xs.push(c);
    }
    xs.push(x);
    xs.sort_unstable();
    xs.dedup();
    Ok(xs)
}

/// `10, 100, 1000, ...` up to `x`, with `x` itself last.
pub fn decade_checkpoints(x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(10u64), |c| c.checked_mul(10))
        .take_while(|&c| c <= x)
        .collect();
    if out.last() != Some(&x) {
        out.push(x);
    }
    out
}

/// Counts `{n <= x : indicator(n)}` at each checkpoint.
pub fn empirical_density(
    mut indicator: impl FnMut(u64) -> bool,
    x: u64,
    checkpoints: &[u64],
) -> Result<DensityEstimate> {
    let xs = normalize_checkpoints(x, checkpoints)?;
    let mut out = Vec::with_capacity(xs.len());
    let mut count = 0u64;
    let mut next = xs.iter().copied().peekable();
    for n in 1..=x {
        if indicator(n) {
            count += 1;
        }
        if next.peek() == Some(&n) {
            next.next();
            out.push(Checkpoint { x: n, count });
        }
    }
    Ok(DensityEstimate { checkpoints: out, zero_test: None, exact: true })
}

/// Density of a tabulated support, recording the zero test behind it.
pub fn support_density(support: &Support, x: u64, checkpoints: &[u64]) -> Result<DensityEstimate> {
    if x > support.limit() as u64 {
        return Err(Error::Range { what: "density limit", value: x, limit: support.limit() as u64 });
    }
    let mut est = empirical_density(|n| support.contains(n as usize), x, checkpoints)?;
    est.zero_test = Some(support.zero_test());
    est.exact = support.zero_test() == ZeroTest::Exact;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_numbers() {
        let d = empirical_density(|n| n % 2 == 0, 1000, &[10, 100]).unwrap();
        assert_eq!(d.value(), 0.5);
        assert_eq!(d.exact_value(), Rational::new(1, 2));
        assert_eq!(d.checkpoints.len(), 3);
    }

    #[test]
    fn singleton() {
        let d = empirical_density(|n| n == 1, 1000, &[]).unwrap();
        assert_eq!(d.value(), 0.001);
        assert_eq!(d.count(), 1);
    }

    #[test]
    fn checkpoint_beyond_limit() {
        let err = empirical_density(|_| true, 100, &[1000]).unwrap_err();
        assert!(matches!(err, Error::Range { value: 1000, .. }));
    }

    #[test]
    fn lower_and_upper_follow_checkpoints() {
        let d = empirical_density(|n| n <= 10, 100, &[10, 50]).unwrap();
        assert_eq!(d.upper(), 1.0);
        assert_eq!(d.lower(), 0.1);
        assert_eq!(d.at(50).unwrap().count, 10);
    }

    #[test]
    fn decades() {
        assert_eq!(decade_checkpoints(1000), vec![10, 100, 1000]);
        assert_eq!(decade_checkpoints(2500), vec![10, 100, 1000, 2500]);
    }
}
