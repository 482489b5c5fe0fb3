use crate::arith::PrimeTail;
use crate::density::{c_nu_constant, support_density, thinness_partial_sums, EulerProductResult};
use crate::density::empirical::normalize_checkpoints;
use crate::error::{Error, Result};
use crate::pairs::pair::NuPair;
use crate::scalar::Scalar;

/// Absolute slack on empirical densities. The convergence rate of `A(x)/x`
/// is not known, so this is an engineering tolerance.
pub const DEFAULT_DENSITY_SLACK: f64 = 0.01;

/// Outcome of checking `d(supp g) >= C_ν / Σ_{n ∈ supp f} 1/n` at a finite `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub x: u64,
    pub empirical_density: f64,
    pub c_nu: EulerProductResult,
    /// `Σ_{n ∈ supp f, n <= N} 1/n` plus the declared tail; infinite when
    /// `supp f` is declared not thin.
    pub support_reciprocal_sum: f64,
    /// `C_ν` (its certified lower end) divided by the reciprocal sum.
    pub c_nu_over_sum: f64,
    pub margin: f64,
    pub slack: f64,
}

impl LowerBoundReport {
    pub fn holds(&self) -> bool {
        self.margin >= -self.slack
    }
}

/// Checks the multiplicative lower bound on `d(supp g)` at `x`.
///
/// Requires `f` to carry its multiplicative rule and `supp f` to have a
/// declared tail.
pub fn verify_density_lower_bound<V: Scalar>(
    pair: &NuPair<V>,
    prime_cutoff: u64,
    x: u64,
    slack: f64,
) -> Result<LowerBoundReport> {
    if pair.f_spec().is_none() {
        return Err(Error::NotMultiplicative);
    }
    if !pair.is_nonzero() {
        return Err(Error::Hypothesis(format!(
            "f vanishes on [1, {}]; the bound would be vacuous",
            pair.limit()
        )));
    }
    let c_nu = c_nu_constant(pair.nu_spec(), prime_cutoff)?;
    let f_support = pair.f().support();
    let limit = pair.limit() as u64;
    let tail = pair.f_tail().bound(pair.limit())?;
    let support_reciprocal_sum = match tail {
        Some(t) => thinness_partial_sums(&f_support, limit, &[])?[0].1 + t,
        None => f64::INFINITY,
    };
    let c_nu_over_sum = c_nu.lower_bound() / support_reciprocal_sum;
    let empirical_density = support_density(&pair.g().support(), x, &[])?.value();
    Ok(LowerBoundReport {
        x,
        empirical_density,
        c_nu,
        support_reciprocal_sum,
        c_nu_over_sum,
        margin: empirical_density - c_nu_over_sum,
        slack,
    })
}

/// Ratio that `count(x)/x` must keep between consecutive checkpoints.
pub const STABILITY_RATIO: f64 = 0.9;
/// Fraction of `d · log(x2/x1)` that the reciprocal sum must gain.
pub const GROWTH_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

/// Growth of the reciprocal sum between two checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStep {
    pub from: u64,
    pub to: u64,
    pub growth: f64,
    pub required: f64,
}

/// Whether the side that is not declared thin behaves like a set of positive density.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCheck {
    pub side: Side,
    /// Density at the last checkpoint, used as the stabilized estimate.
    pub density: f64,
    pub previous_density: f64,
    pub steps: Vec<GrowthStep>,
}

impl StabilityCheck {
    pub fn density_stable(&self) -> bool {
        self.density > STABILITY_RATIO * self.previous_density && self.density > 0.0
    }

    pub fn growth_consistent(&self) -> bool {
        self.steps.iter().all(|s| s.growth >= s.required)
    }

    pub fn consistent(&self) -> bool {
        self.density_stable() && self.growth_consistent()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub checkpoints: Vec<u64>,
    pub f_sums: Vec<f64>,
    pub g_sums: Vec<f64>,
    pub f_counts: Vec<u64>,
    pub g_counts: Vec<u64>,
    /// The side declared thin, if exactly one is.
    pub thin_side: Option<Side>,
    /// Both sides declared thin, which no nonzero pair admits when
    /// `supp ν` has positive density.
    pub both_declared_thin: bool,
    pub other_side: Option<StabilityCheck>,
    /// `false` when `ν` is declared to have a divergent unsupported-prime
    /// sum, i.e. its support has density zero.
    pub nu_positive_density: Option<bool>,
}

/// Reciprocal sums and counts of both supports, with a positive-density
/// consistency check on whichever side is not declared thin.
pub fn uncertainty_report<V: Scalar>(pair: &NuPair<V>, checkpoints: &[u64]) -> Result<UncertaintyReport> {
    if !pair.is_nonzero() {
        return Err(Error::Hypothesis("the pair is zero; a nonzero pair is required".into()));
    }
    let limit = pair.limit() as u64;
    let xs = normalize_checkpoints(limit, checkpoints)?;
    let f_support = pair.f().support();
    let g_support = pair.g().support();
    let sums = |s| -> Result<Vec<f64>> {
        Ok(thinness_partial_sums(s, limit, &xs)?.into_iter().map(|(_, v)| v).collect())
    };
    let f_sums = sums(&f_support)?;
    let g_sums = sums(&g_support)?;
    let f_counts: Vec<u64> = xs.iter().map(|&x| f_support.count_upto(x as usize) as u64).collect();
    let g_counts: Vec<u64> = xs.iter().map(|&x| g_support.count_upto(x as usize) as u64).collect();

    let f_thin = pair.f_tail().is_thin();
    let g_thin = pair.g_tail().is_thin();
    let thin_side = match (f_thin, g_thin) {
        (true, false) => Some(Side::F),
        (false, true) => Some(Side::G),
        _ => None,
    };
    let other_side = thin_side.map(|thin| {
        let (side, counts, sums) = match thin {
            Side::F => (Side::G, &g_counts, &g_sums),
            Side::G => (Side::F, &f_counts, &f_sums),
        };
        stability(side, &xs, counts, sums)
    });
    let nu_positive_density = pair.nu_spec().prime_tail().map(|t| *t != PrimeTail::Divergent);
    Ok(UncertaintyReport {
        checkpoints: xs,
        f_sums,
        g_sums,
        f_counts,
        g_counts,
        thin_side,
        both_declared_thin: f_thin && g_thin,
        other_side,
        nu_positive_density,
    })
}

fn stability(side: Side, xs: &[u64], counts: &[u64], sums: &[f64]) -> StabilityCheck {
    let ratio = |i: usize| counts[i] as f64 / xs[i] as f64;
    let last = xs.len() - 1;
    let density = ratio(last);
    let previous_density = if last > 0 { ratio(last - 1) } else { density };
    let steps = (1..xs.len())
        .map(|i| GrowthStep {
            from: xs[i - 1],
            to: xs[i],
            growth: sums[i] - sums[i - 1],
            required: GROWTH_FRACTION * density * (xs[i] as f64 / xs[i - 1] as f64).ln(),
        })
        .collect();
    StabilityCheck { side, density, previous_density, steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{builtins, ArithFunc};
    use crate::pairs::pair::{make_multiplicative_pair, make_pair, TailDeclaration};
    use crate::rational::Rational;

    #[test]
    fn non_multiplicative_refused() {
        let f = ArithFunc::<Rational>::indicator(1000, [6]).unwrap();
        let pair = make_pair(f, &builtins::mobius(), 1000).unwrap().with_f_tail(TailDeclaration::Finite);
        assert_eq!(
            verify_density_lower_bound(&pair, 1000, 1000, DEFAULT_DENSITY_SLACK),
            Err(Error::NotMultiplicative)
        );
    }

    #[test]
    fn unknown_tail_refused() {
        let pair = make_multiplicative_pair(&builtins::epsilon::<Rational>(), &builtins::mobius(), 1000).unwrap();
        assert!(matches!(
            verify_density_lower_bound(&pair, 1000, 1000, DEFAULT_DENSITY_SLACK),
            Err(Error::UnknownTail(_))
        ));
    }

    #[test]
    fn epsilon_mu_equality_case() {
        let pair = make_multiplicative_pair(&builtins::epsilon::<Rational>(), &builtins::mobius(), 100_000)
            .unwrap()
            .with_f_tail(TailDeclaration::Finite);
        let r = verify_density_lower_bound(&pair, 1000, 100_000, DEFAULT_DENSITY_SLACK).unwrap();
        assert_eq!(r.support_reciprocal_sum, 1.0);
        assert!((r.c_nu_over_sum - crate::density::SIX_OVER_PI_SQUARED).abs() < 1e-15);
        assert!(r.margin.abs() < 1e-3);
        assert!(r.holds());
    }

    #[test]
    fn divergent_support_gives_zero_bound() {
        let pair = make_multiplicative_pair(&builtins::one::<Rational>(), &builtins::mobius(), 1000)
            .unwrap()
            .with_f_tail(TailDeclaration::Divergent);
        let r = verify_density_lower_bound(&pair, 100, 1000, DEFAULT_DENSITY_SLACK).unwrap();
        assert_eq!(r.c_nu_over_sum, 0.0);
        assert!(r.holds());
    }

    #[test]
    fn zero_pair_excluded() {
        let pair = make_pair(ArithFunc::<Rational>::zero(100).unwrap(), &builtins::mobius(), 100).unwrap();
        assert!(matches!(uncertainty_report(&pair, &[10]), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn roles_reversed() {
        let mu = builtins::mobius::<Rational>().tabulate(10_000).unwrap();
        let pair = make_pair(mu, &builtins::one(), 10_000)
            .unwrap()
            .with_g_tail(TailDeclaration::Finite);
        let r = uncertainty_report(&pair, &[100, 1000]).unwrap();
        assert_eq!(r.thin_side, Some(Side::G));
        assert_eq!(r.g_sums, vec![1.0, 1.0, 1.0]);
        let other = r.other_side.unwrap();
        assert_eq!(other.side, Side::F);
        assert!(other.consistent());
    }
}
