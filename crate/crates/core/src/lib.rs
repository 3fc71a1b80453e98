//! Defect-reduction planning over CK code metrics.
//!
//! Planners turn a defective file's metrics into per-feature target
//! intervals; the [`evaluate`] module scores those plans against what
//! developers actually changed in a later release.

pub mod data;
pub mod discretize;
pub mod error;
pub mod evaluate;
pub mod explain;
pub mod learners;
pub mod metrics;
pub mod planners;
pub mod preprocess;
pub mod seed;
pub mod synthetic;

pub use error::{Error, Result};
pub use metrics::{Metric, N_FEATURES};
