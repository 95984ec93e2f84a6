//! Fair allocation of indivisible goods among agents whose utilities depend on
//! what their neighbours receive.
//!
//! Everything is generic over [`Scalar`]; exact rational arithmetic
//! ([`Rational`]) is the default for verification, `f64` is supported for speed.

pub mod allocation;
pub mod claiming;
pub mod error;
pub mod experiment;
pub mod fairness;
pub mod generate;
pub mod instance;
pub mod io;
pub mod matching;
pub mod partitioning;
pub mod scalar;
mod serde_display;

pub use allocation::{Allocation, Extreme, ExtremeMethod, Partition};
pub use claiming::{cut_and_choose, run_bc, ClaimOutcome, PartitionSource, Trace};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentReport};
pub use fairness::{check_allocation, emms, mms, EmmsMode, FairnessReport};
pub use generate::{generate_random, ExperimentConfig, Strategy};
pub use instance::{Externality, InfluenceVector, Instance};
pub use partitioning::{ObjectiveVector, DEFAULT_SEARCH_CAP};
pub use scalar::{format_rational, parse_rational, Scalar};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
pub type ExactInstance = Instance<Rational>;
pub type ExactAllocation = Allocation<Rational>;
pub type ExactOutcome = ClaimOutcome<Rational>;
pub type ExactReport = FairnessReport<Rational>;
pub type FloatInstance = Instance<f64>;
pub type FloatAllocation = Allocation<f64>;
pub type SingleInstance = Instance<f32>;
