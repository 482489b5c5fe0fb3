//! Partial means `(1/x) Σ_{n <= x} |h(n)|` and the truncated convolution
//! `g_y(n) = Σ_{d | n, d <= y} f(d) ν(n/d)`.

use crate::arith::{convolve_truncated, ArithFunc, Boundedness, MultiplicativeSpec};
use crate::density::empirical::normalize_checkpoints;
use crate::density::euler::neumaier_add;
use crate::error::{Error, Result};
use crate::pairs::classes::single_divisor_mask;
use crate::pairs::pair::TailDeclaration;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Relative allowance for rounding when a drift comparison has to fall back
/// to floating point.
const FLOAT_COMPARE_EPS: f64 = 1e-12;

/// `g_y` on `[1, N]`; `f` must be tabulated to `N`.
pub fn truncated_convolution<V: Scalar>(
    f: &ArithFunc<V>,
    nu_spec: &MultiplicativeSpec<V>,
    y: u64,
    limit: usize,
) -> Result<ArithFunc<V>> {
    if f.limit() != limit {
        return Err(Error::Shape(format!(
            "f is tabulated to {} but N is {limit}",
            f.limit()
        )));
    }
    let nu = nu_spec.tabulate(limit)?.with_zero_test(f.zero_test())?;
    convolve_truncated(f, &nu, y)
}

/// Sum of nonnegative terms kept exact while it fits the small rational
/// tier, and compensated in floating point throughout.
#[derive(Debug, Clone)]
struct MixedSum {
    exact: Option<Rational>,
    sum: f64,
    comp: f64,
}

impl MixedSum {
    fn new(exact: bool) -> Self {
        MixedSum { exact: exact.then(Rational::zero), sum: 0.0, comp: 0.0 }
    }

    fn add(&mut self, exact: Option<Rational>, approx: f64) {
        neumaier_add(&mut self.sum, &mut self.comp, approx);
        self.exact = match (self.exact.take(), exact) {
            (Some(acc), Some(t)) => Some(acc + t).filter(Rational::is_small),
            _ => None,
        };
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanPoint {
    pub x: u64,
    pub mean: f64,
    /// Present when the partial sum stayed within exact range.
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueSeries {
    pub points: Vec<MeanPoint>,
    pub truncation: Option<u64>,
}

impl MeanValueSeries {
    pub fn with_truncation(mut self, y: u64) -> Self {
        self.truncation = Some(y);
        self
    }

    pub fn first(&self) -> &MeanPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &MeanPoint {
        &self.points[self.points.len() - 1]
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| match (&w[0].exact, &w[1].exact) {
            (Some(a), Some(b)) => a < b,
            _ => w[0].mean < w[1].mean,
        })
    }

    /// `last / first`; infinite when the first mean is zero.
    pub fn growth_ratio(&self) -> f64 {
        self.last().mean / self.first().mean
    }
}

/// Partial means of `|h|` at each checkpoint, with `N` always included.
pub fn mean_value_series<V: Scalar>(h: &ArithFunc<V>, checkpoints: &[u64]) -> Result<MeanValueSeries> {
    let xs = normalize_checkpoints(h.limit() as u64, checkpoints)?;
    let mut acc = MixedSum::new(true);
    let mut points = Vec::with_capacity(xs.len());
    let mut next = 0usize;
    for (n, v) in h.iter() {
        if !v.is_structural_zero() {
            acc.add(v.exact_abs(), v.modulus());
        }
        if next < xs.len() && xs[next] == n as u64 {
            let x = xs[next];
            points.push(MeanPoint {
                x,
                mean: acc.value() / x as f64,
                exact: acc.exact.as_ref().map(|s| s / &Rational::from(x as i64)),
            });
            next += 1;
        }
    }
    Ok(MeanValueSeries { points, truncation: None })
}

/// `λ_y` at a single `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaEstimate {
    pub y: u64,
    pub value: f64,
    pub exact: Option<Rational>,
}

/// `|λ_{y2} − λ_{y1}|` against `sup|ν| · Σ_{y1 < d <= y2} |f(d)|/d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftCheck {
    pub y1: u64,
    pub y2: u64,
    pub observed: f64,
    pub bound: f64,
    /// Whether the comparison was made in exact arithmetic.
    pub exact: bool,
    pub holds: bool,
}

/// `|f(d)| · δ · density` for `d = min supp f`, a lower bound for `λ` at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityWitness {
    pub d: u64,
    pub f_d_abs: f64,
    pub delta: f64,
    pub density: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueReport {
    pub x: u64,
    pub limit: u64,
    pub sup_nu: f64,
    /// `inf |ν(n)|` over `supp ν ∩ [1, N]`; zero when `ν` vanishes there.
    pub delta: f64,
    pub lambdas: Vec<LambdaEstimate>,
    /// `λ` from the full convolution at `x`.
    pub lambda: LambdaEstimate,
    pub drifts: Vec<DriftCheck>,
    /// `sup|ν| · (Σ_{y < d <= N} |f(d)|/d + declared tail)` for the largest
    /// `y`; `|λ_y − λ|` cannot exceed this at any `x`.
    pub limit_radius: f64,
    pub witness: Option<PositivityWitness>,
}

impl MeanValueReport {
    pub fn drift_holds(&self) -> bool {
        self.drifts.iter().all(|d| d.holds)
    }

    pub fn witness_holds(&self) -> bool {
        self.witness
            .as_ref()
            .map_or(true, |w| self.lambda.value >= w.value * (1.0 - FLOAT_COMPARE_EPS))
    }
}

/// Estimates `λ_y` at `x` for every `y` in the grid and checks the drift
/// bound between consecutive grid points.
///
/// `weighted_tail` declares `Σ_{d > N} |f(d)|/d`; it must be convergent.
pub fn verify_mean_value_convergence<V: Scalar>(
    f: &ArithFunc<V>,
    nu_spec: &MultiplicativeSpec<V>,
    y_grid: &[u64],
    x: u64,
    weighted_tail: TailDeclaration,
) -> Result<MeanValueReport> {
    if nu_spec.boundedness() == Boundedness::Unbounded {
        return Err(Error::Hypothesis(format!(
            "{} is declared unbounded; the mean value need not exist",
            nu_spec.name()
        )));
    }
    let limit = f.limit();
    let tail = weighted_tail.bound(limit)?.ok_or_else(|| {
        Error::Hypothesis("Σ |f(d)|/d is declared divergent".into())
    })?;
    if x == 0 || x > limit as u64 {
        return Err(Error::Range { what: "mean-value x", value: x, limit: limit as u64 });
    }
    if y_grid.is_empty() {
        return Err(Error::Spec("the y grid is empty".into()));
    }
    let nu = nu_spec.tabulate(limit)?.with_zero_test(f.zero_test())?;
    let nu_support = nu.support();
    let mut sup_nu = 0.0f64;
    let mut sup_exact = Some(Rational::zero());
    let mut delta = f64::INFINITY;
    for (n, v) in nu.iter() {
        let m = v.modulus();
        sup_nu = sup_nu.max(m);
        sup_exact = match (sup_exact, v.exact_abs()) {
            (Some(s), Some(a)) => Some(if a > s { a } else { s }),
            _ => None,
        };
        if nu_support.contains(n) {
            delta = delta.min(m);
        }
    }
    if delta.is_infinite() {
        delta = 0.0;
    }

    let mut ys: Vec<u64> = y_grid.iter().map(|&y| y.min(limit as u64)).collect();
    ys.sort_unstable();
    ys.dedup();

    let lambda_at = |y: u64| -> Result<LambdaEstimate> {
        let g = convolve_truncated(f, &nu, y)?;
        let p = mean_value_series(&g.truncated(x as usize)?, &[])?.points.pop().unwrap();
        Ok(LambdaEstimate { y, value: p.mean, exact: p.exact })
    };
    let lambdas = ys.iter().map(|&y| lambda_at(y)).collect::<Result<Vec<_>>>()?;
    let lambda = lambda_at(limit as u64)?;

    // Σ |f(d)|/d over (a, b], exact while it stays small.
    let weighted = |a: u64, b: u64| {
        let mut s = MixedSum::new(true);
        for d in (a as usize + 1)..=(b as usize) {
            let v = f.get(d);
            if !v.is_structural_zero() {
                let exact = v.exact_abs().map(|r| &r / &Rational::from(d as i64));
                s.add(exact, v.modulus() / d as f64);
            }
        }
        s
    };

    let drifts = lambdas
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let mass = weighted(a.y, b.y);
            let bound = sup_nu * mass.value();
            let observed = (b.value - a.value).abs();
            let exact = match (&a.exact, &b.exact, &mass.exact, &sup_exact) {
                (Some(la), Some(lb), Some(m), Some(s)) => Some((lb - la).abs() <= s * m),
                _ => None,
            };
            DriftCheck {
                y1: a.y,
                y2: b.y,
                observed,
                bound,
                exact: exact.is_some(),
                holds: exact.unwrap_or(observed <= bound * (1.0 + FLOAT_COMPARE_EPS) + f64::EPSILON),
            }
        })
        .collect();

    let last_y = *ys.last().unwrap();
    let limit_radius = sup_nu * (weighted(last_y, limit as u64).value() + tail);

    let witness = if delta > 0.0 {
        let (d, mask) = single_divisor_mask(&f.support(), &nu_support, x as usize)
            .ok_or_else(|| Error::Hypothesis(format!("f vanishes on [1, {x}]")))?;
        let density = mask.iter().filter(|&&b| b).count() as f64 / x as f64;
        let f_d_abs = f.get(d).modulus();
        Some(PositivityWitness { d: d as u64, f_d_abs, delta, density, value: f_d_abs * delta * density })
    } else {
        None
    };

    Ok(MeanValueReport {
        x,
        limit: limit as u64,
        sup_nu,
        delta,
        lambdas,
        lambda,
        drifts,
        limit_radius,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{builtins, convolve};

    #[test]
    fn truncation_extremes() {
        let f = builtins::mobius::<Rational>().tabulate(200).unwrap();
        let nu = builtins::one::<Rational>();
        assert!(truncated_convolution(&f, &nu, 0, 200).unwrap().is_identically_zero());
        let full = convolve(&f, &nu.tabulate(200).unwrap()).unwrap();
        assert_eq!(truncated_convolution(&f, &nu, 200, 200).unwrap(), full);
        assert_eq!(truncated_convolution(&f, &nu, 10_000, 200).unwrap(), full);
    }

    #[test]
    fn only_d_one_below_two() {
        let f = ArithFunc::<Rational>::indicator(50, [1, 2]).unwrap();
        let g1 = truncated_convolution(&f, &builtins::one(), 1, 50).unwrap();
        assert!(g1.values().iter().all(Rational::is_one));
    }

    #[test]
    fn identity_mean_is_half_x_plus_one() {
        let h = builtins::identity::<Rational>().tabulate(1000).unwrap();
        let s = mean_value_series(&h, &[10, 100]).unwrap();
        let expect: Vec<Rational> = [10i64, 100, 1000].iter().map(|&x| Rational::new(x + 1, 2)).collect();
        let got: Vec<Rational> = s.points.iter().map(|p| p.exact.clone().unwrap()).collect();
        assert_eq!(got, expect);
        assert!(s.is_strictly_increasing());
    }

    #[test]
    fn harmonic_mean_falls_back_to_floating() {
        let h = builtins::reciprocal_identity::<Rational>().tabulate(5000).unwrap();
        let s = mean_value_series(&h, &[10]).unwrap();
        assert_eq!(s.first().exact, Some(Rational::new(7381, 25200)));
        assert!(s.last().exact.is_none());
        let h5000: f64 = (1..=5000).map(|n| 1.0 / n as f64).sum();
        assert!((s.last().mean - h5000 / 5000.0).abs() < 1e-15);
    }

    #[test]
    fn unbounded_nu_refused() {
        let f = ArithFunc::<Rational>::epsilon(100).unwrap();
        let r = verify_mean_value_convergence(&f, &builtins::identity(), &[1], 100, TailDeclaration::Finite);
        assert!(matches!(r, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn unknown_weighted_tail_refused() {
        let f = ArithFunc::<Rational>::epsilon(100).unwrap();
        let r = verify_mean_value_convergence(&f, &builtins::mobius(), &[1], 100, TailDeclaration::Unknown);
        assert!(matches!(r, Err(Error::UnknownTail(_))));
    }

    #[test]
    fn two_point_support_drift() {
        let f = ArithFunc::<Rational>::from_fn(10_000, |n| match n {
            1 => Rational::one(),
            2 => Rational::new(-3, 2),
            _ => Rational::zero(),
        })
        .unwrap();
        let r = verify_mean_value_convergence(&f, &builtins::mobius(), &[1, 2], 10_000, TailDeclaration::Finite)
            .unwrap();
        assert_eq!(r.sup_nu, 1.0);
        assert_eq!(r.delta, 1.0);
        assert_eq!(r.drifts.len(), 1);
        assert!(r.drifts[0].exact);
        assert!((r.drifts[0].bound - 0.75).abs() < 1e-15);
        assert!(r.drift_holds());
        assert_eq!(r.limit_radius, 0.0);
        assert_eq!(r.lambda, LambdaEstimate { y: 10_000, ..r.lambdas[1].clone() });
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.d, 1);
        assert!(w.value > 0.0);
        assert!(r.witness_holds());
    }
}
