use std::fmt::{self, Debug};

use num_complex::Complex64;

use crate::rational::Rational;

/// Default absolute zero threshold for floating tables.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueMode {
    Exact,
    Floating,
}

impl ValueMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueMode::Exact => "exact",
            ValueMode::Floating => "floating",
        }
    }
}

impl fmt::Display for ValueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a table decides that a value is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroTest {
    Exact,
    /// `|v| <= tau`.
    Absolute(f64),
    /// `|v| <= tau * max_n |f(n)|`, the maximum taken over the whole table.
    Relative(f64),
}

impl ZeroTest {
    /// The threshold as recorded in reports; empty for exact tests.
    pub fn describe(&self) -> String {
        match self {
            ZeroTest::Exact => String::new(),
            ZeroTest::Absolute(t) => format!("abs:{t:e}"),
            ZeroTest::Relative(t) => format!("rel:{t:e}"),
        }
    }

    /// Resolve to an absolute cutoff given the table's largest modulus.
    pub(crate) fn cutoff(&self, max_modulus: f64) -> Option<f64> {
        match *self {
            ZeroTest::Exact => None,
            ZeroTest::Absolute(t) => Some(t),
            ZeroTest::Relative(t) => Some(t * max_modulus),
        }
    }
}

/// Codomain of an arithmetic function table.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    const MODE: ValueMode;

    fn zero() -> Self;
    fn one() -> Self;
    /// Literal zero. Kernels skip these terms; it never applies a threshold.
    fn is_structural_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    /// `self += a * b`.
    fn add_product(&mut self, a: &Self, b: &Self);
    fn modulus(&self) -> f64;
    /// Exact `|self|` when the mode supports it.
    fn exact_abs(&self) -> Option<Rational>;
    fn from_rational(r: &Rational) -> Self;
    fn default_zero_test() -> ZeroTest;
    fn render(&self) -> String;

    /// Zero under `test`, where `cutoff` is the resolved absolute threshold.
    fn is_zero_under(&self, cutoff: Option<f64>) -> bool {
        match cutoff {
            None => self.is_structural_zero(),
            Some(t) => self.modulus() <= t,
        }
    }
}

impl Scalar for Rational {
    const MODE: ValueMode = ValueMode::Exact;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_structural_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        Rational::recip(self)
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        Rational::add_product(self, a, b)
    }
    fn modulus(&self) -> f64 {
        self.abs().to_f64()
    }
    fn exact_abs(&self) -> Option<Rational> {
        Some(self.abs())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn default_zero_test() -> ZeroTest {
        ZeroTest::Exact
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Complex64 {
    const MODE: ValueMode = ValueMode::Floating;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_structural_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if self.is_structural_zero() {
            None
        } else {
            Some(self.inv())
        }
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn exact_abs(&self) -> Option<Rational> {
        None
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64(), 0.0)
    }
    fn default_zero_test() -> ZeroTest {
        ZeroTest::Absolute(DEFAULT_ZERO_THRESHOLD)
    }
    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.im < 0.0 {
            format!("{}-{}i", self.re, -self.im)
        } else {
            format!("{}+{}i", self.re, self.im)
        }
    }
}
