//! NSGA-II over bounded real vectors.

mod nsga2;
mod operators;
mod sorting;

pub use nsga2::{
    compare_fronts, nsga2, Evaluator, Generation, Nsga2Result, Nsga2Settings, ProblemEvaluator,
};
pub use operators::{polynomial_mutation, sbx_crossover};
pub use sorting::{crowding_distance, dominates, fast_nondominated_sort, fronts};
