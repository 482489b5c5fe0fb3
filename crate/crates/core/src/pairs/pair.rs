use crate::arith::{convolve, dirichlet_inverse, ArithFunc, MultiplicativeSpec};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::{Scalar, ValueMode, ZeroTest};

/// Declared behaviour of a positive series beyond the tabulated range, such
/// as `Σ_{n ∈ supp f, n > N} 1/n` or `Σ_{n > N} |f(n)|/n`.
///
/// A finite table cannot decide convergence, so the operations that rely on
/// it take the declaration as an input and refuse [`TailDeclaration::Unknown`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDeclaration {
    /// No terms beyond `N`.
    Finite,
    /// Terms beyond `N` start at most `1/(N+1)` and shrink by at least the
    /// given ratio `r > 1` from one to the next.
    Geometric(f64),
    /// The whole tail sums to at most this much.
    Bounded(f64),
    /// The series diverges; the set is not thin.
    Divergent,
    Unknown,
}

impl TailDeclaration {
    /// Upper bound on the tail past `limit`; `None` when divergent.
    pub fn bound(&self, limit: usize) -> Result<Option<f64>> {
        match *self {
            TailDeclaration::Finite => Ok(Some(0.0)),
            TailDeclaration::Geometric(r) if r > 1.0 && r.is_finite() => {
                Ok(Some(r / ((r - 1.0) * (limit as f64 + 1.0))))
            }
            TailDeclaration::Geometric(r) => {
                Err(Error::Spec(format!("geometric tail ratio must exceed 1, got {r}")))
            }
            TailDeclaration::Bounded(b) if b >= 0.0 && b.is_finite() => Ok(Some(b)),
            TailDeclaration::Bounded(b) => {
                Err(Error::Spec(format!("tail bound must be finite and >= 0, got {b}")))
            }
            TailDeclaration::Divergent => Ok(None),
            TailDeclaration::Unknown => Err(Error::UnknownTail(
                "the tail beyond the table is undeclared".into(),
            )),
        }
    }

    /// Declared convergent (thin, for a support).
    pub fn is_thin(&self) -> bool {
        matches!(
            self,
            TailDeclaration::Finite | TailDeclaration::Geometric(_) | TailDeclaration::Bounded(_)
        )
    }
}

impl std::fmt::Display for TailDeclaration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailDeclaration::Finite => f.write_str("finite"),
            TailDeclaration::Geometric(r) => write!(f, "geometric:{r}"),
            TailDeclaration::Bounded(b) => write!(f, "bound:{b}"),
            TailDeclaration::Divergent => f.write_str("divergent"),
            TailDeclaration::Unknown => f.write_str("unknown"),
        }
    }
}

/// `(f, g)` with `g = f * ν` on `[1, N]` for a multiplicative `ν`.
#[derive(Debug, Clone)]
pub struct NuPair<V: Scalar = Rational> {
    f: ArithFunc<V>,
    f_spec: Option<MultiplicativeSpec<V>>,
    nu_spec: MultiplicativeSpec<V>,
    nu: ArithFunc<V>,
    g: ArithFunc<V>,
    f_tail: TailDeclaration,
    g_tail: TailDeclaration,
}

/// Builds the pair `(f, f * ν)` on `[1, limit]`. In exact mode the roundtrip
/// `g * ν⁻¹ = f` is verified before returning.
pub fn make_pair<V: Scalar>(
    f: ArithFunc<V>,
    nu_spec: &MultiplicativeSpec<V>,
    limit: usize,
) -> Result<NuPair<V>> {
    if f.limit() != limit {
        return Err(Error::Shape(format!(
            "f is tabulated to {} but the pair limit is {limit}",
            f.limit()
        )));
    }
    let nu = nu_spec.tabulate(limit)?.with_zero_test(f.zero_test())?;
    let g = convolve(&f, &nu)?;
    if V::MODE == ValueMode::Exact {
        let recovered = convolve(&g, &dirichlet_inverse(&nu)?)?;
        if recovered != f {
            return Err(Error::Hypothesis(format!(
                "g * {}^-1 does not recover f on [1, {limit}]",
                nu_spec.name()
            )));
        }
    }
    Ok(NuPair {
        f,
        f_spec: None,
        nu_spec: nu_spec.clone(),
        nu,
        g,
        f_tail: TailDeclaration::Unknown,
        g_tail: TailDeclaration::Unknown,
    })
}

/// A pair of multiplicative functions; `f` keeps its rule so that
/// multiplicative-only operations can run.
pub fn make_multiplicative_pair<V: Scalar>(
    f_spec: &MultiplicativeSpec<V>,
    nu_spec: &MultiplicativeSpec<V>,
    limit: usize,
) -> Result<NuPair<V>> {
    make_multiplicative_pair_with(f_spec, nu_spec, limit, V::default_zero_test())
}

/// As [`make_multiplicative_pair`], with an explicit zero test for floating tables.
pub fn make_multiplicative_pair_with<V: Scalar>(
    f_spec: &MultiplicativeSpec<V>,
    nu_spec: &MultiplicativeSpec<V>,
    limit: usize,
    zero_test: ZeroTest,
) -> Result<NuPair<V>> {
    let f = f_spec.tabulate(limit)?.with_zero_test(zero_test)?;
    let mut pair = make_pair(f, nu_spec, limit)?;
    pair.f_spec = Some(f_spec.clone());
    Ok(pair)
}

impl<V: Scalar> NuPair<V> {
    pub fn with_f_tail(mut self, tail: TailDeclaration) -> Self {
        self.f_tail = tail;
        self
    }

    pub fn with_g_tail(mut self, tail: TailDeclaration) -> Self {
        self.g_tail = tail;
        self
    }

    pub fn limit(&self) -> usize {
        self.f.limit()
    }

    pub fn f(&self) -> &ArithFunc<V> {
        &self.f
    }

    pub fn g(&self) -> &ArithFunc<V> {
        &self.g
    }

    pub fn nu(&self) -> &ArithFunc<V> {
        &self.nu
    }

    pub fn nu_spec(&self) -> &MultiplicativeSpec<V> {
        &self.nu_spec
    }

    pub fn f_spec(&self) -> Option<&MultiplicativeSpec<V>> {
        self.f_spec.as_ref()
    }

    /// Declared thinness of `supp f` beyond the table.
    pub fn f_tail(&self) -> TailDeclaration {
        self.f_tail
    }

    pub fn g_tail(&self) -> TailDeclaration {
        self.g_tail
    }

    pub fn is_nonzero(&self) -> bool {
        !self.f.is_identically_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::builtins;

    #[test]
    fn epsilon_mu_gives_mu() {
        let p = make_pair(ArithFunc::epsilon(100).unwrap(), &builtins::mobius(), 100).unwrap();
        assert_eq!(p.g(), &builtins::mobius::<Rational>().tabulate(100).unwrap());
    }

    #[test]
    fn mu_one_gives_epsilon() {
        let mu = builtins::mobius::<Rational>().tabulate(100).unwrap();
        let p = make_pair(mu, &builtins::one(), 100).unwrap();
        assert_eq!(p.g(), &ArithFunc::epsilon(100).unwrap());
    }

    #[test]
    fn indicator_of_two_with_one() {
        let f = ArithFunc::<Rational>::indicator(10, [2]).unwrap();
        let p = make_pair(f, &builtins::one(), 10).unwrap();
        let g: Vec<bool> = p.g().values().iter().map(|v| v.is_one()).collect();
        let expected: Vec<bool> = (1..=10).map(|n| n % 2 == 0).collect();
        assert_eq!(g, expected);
    }

    #[test]
    fn limit_mismatch() {
        let f = ArithFunc::<Rational>::epsilon(10).unwrap();
        assert!(matches!(make_pair(f, &builtins::mobius(), 11), Err(Error::Shape(_))));
    }

    #[test]
    fn tail_bounds() {
        assert_eq!(TailDeclaration::Finite.bound(10).unwrap(), Some(0.0));
        assert_eq!(TailDeclaration::Geometric(2.0).bound(9).unwrap(), Some(0.2));
        assert_eq!(TailDeclaration::Divergent.bound(9).unwrap(), None);
        assert!(matches!(TailDeclaration::Unknown.bound(9), Err(Error::UnknownTail(_))));
        assert!(TailDeclaration::Geometric(1.0).bound(9).is_err());
    }
}
