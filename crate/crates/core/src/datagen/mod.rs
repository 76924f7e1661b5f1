//! Sampling plans and dataset splits.

mod plan;
mod split;

pub use plan::{Axis, Dimension, PlanKind, SamplingPlan};
pub use split::{split_holdout, split_shuffled, Split, SplitCounts};
