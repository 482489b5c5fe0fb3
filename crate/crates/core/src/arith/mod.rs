//! Arithmetic functions on `[1, N]` and their Dirichlet algebra.

pub mod convolution;
pub mod csv;
pub mod multiplicative;
pub mod table;

pub use convolution::{
    convolve, convolve_truncated, dirichlet_inverse, dirichlet_transform, mobius_transform,
};
pub use multiplicative::{builtins, Boundedness, MultiplicativeSpec, PrimeTail};
pub use table::{ArithFunc, Support};
