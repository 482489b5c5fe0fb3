//! Dirichlet convolution, inverse and the Möbius/Dirichlet transforms.
//!
//! The kernels walk `(d, k)` pairs with `d·k <= N` instead of enumerating the
//! divisors of every `n`, which gives `O(N log N)` work on dense inputs and
//! much less on sparse ones: literal zeros on either side are skipped. Each
//! output accumulates its terms in increasing `d`, the same order as the
//! textbook sum `Σ_{d | n} f(d) g(n/d)`.

use crate::arith::multiplicative::builtins;
use crate::arith::table::ArithFunc;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn nonzero_indices<V: Scalar>(f: &ArithFunc<V>) -> Vec<usize> {
    f.iter()
        .filter(|(_, v)| !v.is_structural_zero())
        .map(|(n, _)| n)
        .collect()
}

fn check_shapes<V: Scalar>(f: &ArithFunc<V>, g: &ArithFunc<V>) -> Result<()> {
    if f.limit() != g.limit() {
        return Err(Error::Shape(format!(
            "convolution operands have limits {} and {}",
            f.limit(),
            g.limit()
        )));
    }
    if f.zero_test() != g.zero_test() {
        return Err(Error::Shape(format!(
            "convolution operands use different zero tests ({:?} vs {:?})",
            f.zero_test(),
            g.zero_test()
        )));
    }
    Ok(())
}

/// `(f * g)(n) = Σ_{d | n} f(d) g(n/d)` for every `n <= N`.
pub fn convolve<V: Scalar>(f: &ArithFunc<V>, g: &ArithFunc<V>) -> Result<ArithFunc<V>> {
    check_shapes(f, g)?;
    convolve_restricted(f, g, f.limit())
}

/// Truncated convolution `Σ_{d | n, d <= y} f(d) g(n/d)`. `y = 0` gives the
/// zero table and `y >= N` the full convolution.
pub fn convolve_truncated<V: Scalar>(
    f: &ArithFunc<V>,
    g: &ArithFunc<V>,
    y: u64,
) -> Result<ArithFunc<V>> {
    check_shapes(f, g)?;
    let y = usize::try_from(y).unwrap_or(usize::MAX).min(f.limit());
    convolve_restricted(f, g, y)
}

fn convolve_restricted<V: Scalar>(
    f: &ArithFunc<V>,
    g: &ArithFunc<V>,
    max_d: usize,
) -> Result<ArithFunc<V>> {
    let n = f.limit();
    let sf = nonzero_indices(f);
    let sg = nonzero_indices(g);
    let mut out = vec![V::zero(); n];
    for &d in sf.iter().take_while(|&&d| d <= max_d) {
        let fd = f.get(d);
        let kmax = n / d;
        for &k in sg.iter().take_while(|&&k| k <= kmax) {
            out[d * k - 1].add_product(fd, g.get(k));
        }
    }
    Ok(ArithFunc::from_values(out)?.with_zero_test_unchecked(f.zero_test()))
}

/// The Dirichlet inverse `f⁻¹` on `[1, N]`:
/// `f⁻¹(1) = 1/f(1)` and `f⁻¹(n) = -(1/f(1)) Σ_{d | n, d < n} f⁻¹(d) f(n/d)`.
///
/// Fails with [`Error::NotInvertible`] when `f(1)` is zero under the table's
/// zero test.
pub fn dirichlet_inverse<V: Scalar>(f: &ArithFunc<V>) -> Result<ArithFunc<V>> {
    if f.is_zero_at(1) {
        return Err(Error::NotInvertible);
    }
    let inv_f1 = f.get(1).recip().ok_or(Error::NotInvertible)?;
    let neg_inv_f1 = inv_f1.neg();
    let n = f.limit();
    // Support of f beyond 1; the d = n term is excluded by construction.
    let sf: Vec<usize> = nonzero_indices(f).into_iter().filter(|&k| k >= 2).collect();
    let mut acc = vec![V::zero(); n];
    let mut out = Vec::with_capacity(n);
    for d in 1..=n {
        let r = if d == 1 {
            inv_f1.clone()
        } else {
            neg_inv_f1.mul(&acc[d - 1])
        };
        if !r.is_structural_zero() {
            let kmax = n / d;
            for &k in sf.iter().take_while(|&&k| k <= kmax) {
                acc[d * k - 1].add_product(&r, f.get(k));
            }
        }
        out.push(r);
    }
    Ok(ArithFunc::from_values(out)?.with_zero_test_unchecked(f.zero_test()))
}

/// `f̂ = f * 1`.
pub fn dirichlet_transform<V: Scalar>(f: &ArithFunc<V>) -> Result<ArithFunc<V>> {
    let one = ArithFunc::<V>::constant_one(f.limit())?.with_zero_test_unchecked(f.zero_test());
    convolve(f, &one)
}

/// `f̌ = f * μ`.
pub fn mobius_transform<V: Scalar>(f: &ArithFunc<V>) -> Result<ArithFunc<V>> {
    let mu = builtins::mobius::<V>()
        .tabulate(f.limit())?
        .with_zero_test_unchecked(f.zero_test());
    convolve(f, &mu)
}
