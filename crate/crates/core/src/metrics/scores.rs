use crate::problem::{Category, Conditions, Design, Direction, OptHistory, Problem};
use crate::math::exact_sum;
use crate::{Error, Result};

/// Cumulative optimality gap of a trajectory against the best known value.
/// Non-negative whenever `f_star` is at least as good as every point.
pub fn cog(trajectory: &[f64], f_star: f64, direction: Direction) -> Result<f64> {
    if trajectory.is_empty() {
        return Err(Error::invalid("empty trajectory"));
    }
    if !f_star.is_finite() {
        return Err(Error::invalid("reference objective must be finite"));
    }
    Ok(exact_sum(trajectory.iter().map(|&f| match direction {
        Direction::Minimize => f - f_star,
        Direction::Maximize => f_star - f,
    })))
}

/// [`cog`] over objective `index` of a recorded history.
pub fn cog_history(history: &OptHistory, index: usize, f_star: f64, direction: Direction) -> Result<f64> {
    let traj: alloc::vec::Vec<f64> = history
        .objective_values
        .iter()
        .map(|v| v.get(index).copied().ok_or_else(|| Error::invalid("objective index out of range")))
        .collect::<Result<_>>()?;
    cog(&traj, f_star, direction)
}

/// Ratio of violated constraints: the fraction of design/condition pairs
/// with at least one Theory finding (either severity).
pub fn rvc(problem: &dyn Problem, pairs: &[(Design, Conditions)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid("no designs to check"));
    }
    let mut violated = 0usize;
    for (design, conds) in pairs {
        let findings = problem.check_constraints(Some(design), conds)?;
        if findings.iter().any(|v| v.category == Category::Theory) {
            violated += 1;
        }
    }
    Ok(violated as f64 / pairs.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

/// Ratio of failed simulations.
pub fn rf(outcomes: &[Outcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::invalid("no simulation outcomes"));
    }
    let failed = outcomes.iter().filter(|&&o| o == Outcome::Failure).count();
    Ok(failed as f64 / outcomes.len() as f64)
}
