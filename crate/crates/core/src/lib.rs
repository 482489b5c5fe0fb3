//! Arithmetic functions under Dirichlet convolution, densities of their
//! supports, and ν-pairs `(f, f * ν)`.
//!
//! Tables are indexed from 1 and hold either exact [`Rational`] values or
//! `Complex64` values with an explicit [`ZeroTest`].

pub mod arith;
pub mod density;
pub mod error;
pub mod pairs;
pub mod rational;
pub mod scalar;
pub mod sieve;

pub use arith::{builtins, ArithFunc, Boundedness, MultiplicativeSpec, PrimeTail, Support};
pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64;
pub use pairs::{NuPair, TailDeclaration};
pub use rational::Rational;
pub use scalar::{Scalar, ValueMode, ZeroTest, DEFAULT_ZERO_THRESHOLD};
pub use sieve::SpfSieve;
