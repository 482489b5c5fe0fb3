//! ν-pairs `(f, g = f * ν)` and the finite-range checks built on them.

pub mod bounds;
pub mod classes;
pub mod mean;
pub mod pair;

pub use bounds::{
    uncertainty_report, verify_density_lower_bound, GrowthStep, LowerBoundReport, Side, StabilityCheck,
    UncertaintyReport, DEFAULT_DENSITY_SLACK,
};
pub use classes::{classify_support, single_divisor_witness, ClassDecomposition, SingleDivisorWitness, SupportClass};
pub use mean::{
    mean_value_series, truncated_convolution, verify_mean_value_convergence, DriftCheck, LambdaEstimate, MeanPoint,
    MeanValueReport, MeanValueSeries, PositivityWitness,
};
pub use pair::{make_multiplicative_pair, make_multiplicative_pair_with, make_pair, NuPair, TailDeclaration};
