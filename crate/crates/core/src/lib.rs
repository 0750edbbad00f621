//! Observation-weighted classification measures.
//!
//! Each observation carries a positive weight (the diagonal of a weight matrix `S`).
//! The crate computes the weighted Matthews correlation coefficient for binary labels,
//! the weighted multiclass measures ECC, MPC1 and MPC2, and bounds on how far each
//! measure can move when every weight is perturbed by less than `eps`.
//!
//! All math is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases below fix
//! the double-precision types used by the experiments and the command-line tool.
//!
//! ```
//! use wmetrics::{mcc, BinaryLabeledData, Weights64};
//!
//! let data = BinaryLabeledData::new(vec![1, 1, 0, 0], vec![1, 0, 1, 0]).unwrap();
//! let w = Weights64::from_f64(&[1.0, 2.0, 3.0, 4.0]).unwrap();
//! let value = mcc(&data, &w).unwrap();
//! assert!((value + 2.0 / 504f64.sqrt()).abs() < 1e-15);
//! ```

pub mod binary;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod labels;
pub mod matrix;
pub mod multiclass;
pub mod numfmt;
pub mod scalar;
pub mod verify;
pub mod weights;

pub use binary::{confusion, mcc, InnerProducts, WeightedConfusion};
pub use bounds::{
    bound_product, bound_quotient, bound_recip_sqrt, bound_reciprocal, bound_sqrt, ecc_bound,
    mcc_bound, mpc1_bound, mpc2_bound, multiclass_constants, rtc_bound, BinaryBoundContext,
    MulticlassBoundContext,
};
pub use error::{MetricError, Result};
pub use experiments::{run_sweep, SweepConfig, SweepError, SweepResult};
pub use labels::{BinaryLabeledData, MulticlassLabeledData};
pub use matrix::Matrix;
pub use multiclass::{covariance_set, ecc, mpc1, mpc2, CovarianceSet};
pub use scalar::Scalar;
pub use verify::{verify_bound, LabeledInstance, Metric, StabilityReport};
pub use weights::{weighted_inner, WeightVector};

pub type Weights64 = WeightVector<f64>;
pub type Weights32 = WeightVector<f32>;
pub type Confusion64 = WeightedConfusion<f64>;
pub type Confusion32 = WeightedConfusion<f32>;
pub type Covariance64 = CovarianceSet<f64>;
pub type Covariance32 = CovarianceSet<f32>;
pub type BinaryBounds64 = BinaryBoundContext<f64>;
pub type MulticlassBounds64 = MulticlassBoundContext<f64>;
