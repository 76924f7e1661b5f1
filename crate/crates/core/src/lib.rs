//! Numerical core of the design benchmark: a uniform problem API over
//! embedded simulators, evaluation metrics, an NSGA-II optimizer and
//! sampling plans for dataset generation.
//!
//! The crate is `no_std` and only needs an allocator. Anything that touches
//! files, threads or the command line lives in the `designbench` crate.
//!
//! Problems are looked up through [`registry::make`]:
//!
//! ```
//! use designbench_core::{registry, Conditions};
//!
//! let mut problem = registry::make("beams2d/v0").unwrap();
//! let conds = Conditions::from_pairs(&[("volfrac", 2.0)]);
//! let findings = problem.check_constraints(None, &conds).unwrap();
//! assert_eq!(
//!     findings[0].message,
//!     "Config.volfrac: 2.0 ∉ [0.0, 1.0] (Theory, error)"
//! );
//! ```
#![no_std]

extern crate alloc;

pub mod circuits;
pub mod datagen;
mod error;
pub mod linalg;
pub mod math;
pub mod metrics;
pub mod moo;
pub mod photonics;
pub mod problem;
pub mod registry;
pub mod topopt;

pub use error::{Error, Result};
pub use problem::{
    Category, ConditionSpec, Conditions, ConstraintRow, Design, DesignKind, DesignSpace, Direction,
    Grid, Interval, ObjectiveSpec, OptHistory, Problem, ProblemSpec, Quantity, Severity, Violation,
};
