//! Asymptotic densities: empirical counts, residue sieves, sets of multiples
//! and Euler products over primes.

pub mod empirical;
pub mod euler;
pub mod residue;
pub mod thin;

pub use empirical::{decade_checkpoints, empirical_density, support_density, Checkpoint, DensityEstimate};
pub use euler::{
    c_nu_constant, euler_product_support_density, support_prime_deficiency, EulerProductResult,
    SIX_OVER_PI_SQUARED,
};
pub use residue::{
    multiples_density, sieved_density_exact, sieved_density_truncated, ResidueSieveSpec,
    SieveEntry, SieveLimits, SieveTail, TruncatedDensity,
};
pub use thin::{thinness_partial_sums, thinness_partial_sums_exact};
