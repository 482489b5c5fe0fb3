use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::{Scalar, ValueMode, ZeroTest};

/// An arithmetic function tabulated on `[1, N]`.
///
/// Indexing is 1-based: `get(n)` is `f(n)` and there is no `f(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArithFunc<V = Rational> {
    values: Vec<V>,
    zero_test: ZeroTest,
}

impl<V: Scalar> ArithFunc<V> {
    /// Builds a table from `[f(1), f(2), ..., f(N)]`.
    pub fn from_values(values: Vec<V>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("a table needs at least one entry (N >= 1)".into()));
        }
        Ok(ArithFunc {
            values,
            zero_test: V::default_zero_test(),
        })
    }

    pub fn from_fn(limit: usize, mut f: impl FnMut(usize) -> V) -> Result<Self> {
        Self::from_values((1..=limit).map(&mut f).collect())
    }

    pub fn zero(limit: usize) -> Result<Self> {
        Self::from_fn(limit, |_| V::zero())
    }

    /// The convolution identity.
    pub fn epsilon(limit: usize) -> Result<Self> {
        Self::from_fn(limit, |n| if n == 1 { V::one() } else { V::zero() })
    }

    pub fn constant_one(limit: usize) -> Result<Self> {
        Self::from_fn(limit, |_| V::one())
    }

    /// Indicator of `members ∩ [1, limit]`.
    pub fn indicator(limit: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut values = vec![V::zero(); limit];
        for m in members {
            if (1..=limit).contains(&m) {
                values[m - 1] = V::one();
            }
        }
        Self::from_values(values)
    }

    /// Replaces the zero test. Exact tables only accept [`ZeroTest::Exact`].
    pub fn with_zero_test(mut self, test: ZeroTest) -> Result<Self> {
        match (V::MODE, test) {
            (ValueMode::Exact, ZeroTest::Exact) => {}
            (ValueMode::Exact, _) => {
                return Err(Error::Spec("exact tables use exact zero testing".into()))
            }
            (ValueMode::Floating, ZeroTest::Exact) => {}
            (ValueMode::Floating, ZeroTest::Absolute(t) | ZeroTest::Relative(t)) => {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::Spec(format!("zero threshold must be finite and >= 0, got {t}")));
                }
            }
        }
        self.zero_test = test;
        Ok(self)
    }

    pub(crate) fn with_zero_test_unchecked(mut self, test: ZeroTest) -> Self {
        self.zero_test = test;
        self
    }

    pub fn limit(&self) -> usize {
        self.values.len()
    }

    pub fn mode(&self) -> ValueMode {
        V::MODE
    }

    pub fn zero_test(&self) -> ZeroTest {
        self.zero_test
    }

    /// `f(n)` for `1 <= n <= N`.
    #[inline]
    pub fn get(&self, n: usize) -> &V {
        &self.values[n - 1]
    }

    /// Values in order `f(1), f(2), ...`.
    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &V)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (i + 1, v))
    }

    /// The table restricted to `[1, limit]`.
    pub fn truncated(&self, limit: usize) -> Result<Self> {
        if limit == 0 || limit > self.limit() {
            return Err(Error::Range {
                what: "truncation limit",
                value: limit as u64,
                limit: self.limit() as u64,
            });
        }
        Ok(ArithFunc {
            values: self.values[..limit].to_vec(),
            zero_test: self.zero_test,
        })
    }

    pub fn map<W: Scalar>(&self, f: impl Fn(&V) -> W) -> ArithFunc<W> {
        ArithFunc {
            values: self.values.iter().map(f).collect(),
            zero_test: W::default_zero_test(),
        }
    }

    fn cutoff(&self) -> Option<f64> {
        let max = match self.zero_test {
            ZeroTest::Relative(_) => self.values.iter().map(Scalar::modulus).fold(0.0, f64::max),
            _ => 0.0,
        };
        self.zero_test.cutoff(max)
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        self.get(n).is_zero_under(self.cutoff())
    }

    pub fn is_identically_zero(&self) -> bool {
        let cutoff = self.cutoff();
        self.values.iter().all(|v| v.is_zero_under(cutoff))
    }

    /// `{n <= N : f(n) != 0}` under the table's zero test.
    pub fn support(&self) -> Support {
        let cutoff = self.cutoff();
        let mask = self.values.iter().map(|v| !v.is_zero_under(cutoff)).collect();
        Support {
            mask,
            zero_test: self.zero_test,
            cutoff,
        }
    }
}

/// The support of a table, with the zero test that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    mask: Vec<bool>,
    zero_test: ZeroTest,
    cutoff: Option<f64>,
}

impl Support {
    /// Support given directly as a membership mask for `1..=mask.len()`.
    pub fn from_mask(mask: Vec<bool>) -> Self {
        Support {
            mask,
            zero_test: ZeroTest::Exact,
            cutoff: None,
        }
    }

    pub fn limit(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= 1 && n <= self.mask.len() && self.mask[n - 1]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn min(&self) -> Option<usize> {
        self.mask.iter().position(|&b| b).map(|i| i + 1)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i + 1)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn zero_test(&self) -> ZeroTest {
        self.zero_test
    }

    /// The absolute cutoff actually applied, `None` for exact tests.
    pub fn threshold(&self) -> Option<f64> {
        self.cutoff
    }

    /// `#{n <= x : n in supp}`.
    pub fn count_upto(&self, x: usize) -> usize {
        self.mask[..x.min(self.mask.len())].iter().filter(|&&b| b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn epsilon_support_is_one() {
        let e: ArithFunc = ArithFunc::epsilon(5).unwrap();
        assert_eq!(e.support().members().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn zero_table_has_empty_support() {
        let z: ArithFunc = ArithFunc::zero(7).unwrap();
        assert!(z.support().is_empty());
        assert!(z.is_identically_zero());
        assert_eq!(z.support().min(), None);
    }

    #[test]
    fn empty_table_rejected() {
        assert!(matches!(ArithFunc::<Rational>::from_values(vec![]), Err(Error::Shape(_))));
    }

    #[test]
    fn floating_support_records_threshold() {
        let f = ArithFunc::from_values(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1e-14, 0.0),
            Complex64::new(0.0, 2e-12),
        ])
        .unwrap();
        let s = f.support();
        assert_eq!(s.members().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.threshold(), Some(1e-12));

        let rel = f.with_zero_test(ZeroTest::Relative(1e-11)).unwrap().support();
        assert_eq!(rel.members().collect::<Vec<_>>(), vec![1]);
        assert_eq!(rel.threshold(), Some(1e-11));
    }

    #[test]
    fn exact_tables_refuse_thresholds() {
        let f: ArithFunc = ArithFunc::epsilon(3).unwrap();
        assert!(f.with_zero_test(ZeroTest::Absolute(1e-9)).is_err());
    }

    #[test]
    fn count_upto_clamps() {
        let f: ArithFunc = ArithFunc::indicator(10, [2, 4, 9]).unwrap();
        let s = f.support();
        assert_eq!(s.count_upto(4), 2);
        assert_eq!(s.count_upto(100), 3);
    }
}
