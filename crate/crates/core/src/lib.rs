//! Downlink SINR coverage probability in Poisson cellular networks.
//!
//! Four estimators share one set of inputs:
//!
//! * the hybrid dominant-plus-tail estimator ([`estimators::hybrid_coverage`]),
//! * empirical Monte Carlo ([`estimators::empirical_coverage`]),
//! * the infinite-network integral ([`estimators::sg_coverage`]),
//! * a Gaussian moment baseline for `eta = 4` ([`estimators::prob_model_coverage`]).
//!
//! [`error_analysis`] quantifies how far the hybrid estimator with `N` BSs can
//! sit from the infinite network, and [`sweep`] drives batch runs and CSV
//! output for the `ppp-coverage` binary.
//!
//! Monte Carlo runs are reproducible: every trial draws from a substream keyed
//! by the root seed, so results do not depend on the number of worker threads.

pub mod error;
pub mod error_analysis;
pub mod estimators;
pub mod geometry;
pub mod quadrature;
pub mod rng;
pub mod sweep;

pub use error::{Error, Result};
pub use estimators::{CoverageCurve, CoveragePoint, EstimatorSettings, Method, ThresholdGrid};
pub use geometry::{NetworkConfig, PppRealization, Sampler};
