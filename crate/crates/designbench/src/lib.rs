//! File formats, dataset generation, evaluation and rendering on top of
//! `designbench-core`. The `designbench` binary wraps these as a CLI.

pub mod design;
mod error;
pub mod evaluate;
pub mod float;
pub mod generate;
pub mod netlist;
pub mod record;
pub mod render;

pub use error::{Error, Result};
