//! Design-evaluation metrics.
//!
//! Designs are flattened row-major into vectors before comparison.

mod dpp;
mod kernel;
mod mmd;
mod scores;

pub use dpp::{dpp_diversity, Dpp};
pub use kernel::{gaussian_kernel, Bandwidth, KernelParams, SampleSet};
pub use mmd::{mmd2, mmd2_permutation_test, PermutationTest};
pub use scores::{cog, cog_history, rf, rvc, Outcome};
