//! The SIMP optimization loop shared by the density-based problems.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{oc_update, DensityFilter, OcSettings};
use crate::problem::OptHistory;
use crate::{Error, Result};

/// Objective evaluation on physical densities: all reported objective values
/// plus the gradient of the minimized scalar.
pub trait SimpObjective {
    fn evaluate(&mut self, x_phys: &[f64]) -> Result<(Vec<f64>, Vec<f64>)>;
}

impl<F: FnMut(&[f64]) -> Result<(Vec<f64>, Vec<f64>)>> SimpObjective for F {
    fn evaluate(&mut self, x_phys: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self(x_phys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpSettings {
    pub volfrac: f64,
    /// Stop once no design variable moves more than this.
    pub tol: f64,
    pub max_iter: usize,
    pub oc: OcSettings,
}

impl SimpSettings {
    pub fn new(volfrac: f64) -> Self {
        Self { volfrac, tol: 0.01, max_iter: 2000, oc: OcSettings::default() }
    }
}

/// Result of a SIMP run: final physical densities and the history. The last
/// history entry holds the objectives of the returned field.
#[derive(Debug, Clone)]
pub struct SimpOutcome {
    pub x_phys: Vec<f64>,
    pub history: OptHistory,
}

/// Runs OC iterations from `start`, which is used both as the initial design
/// variables and the initial physical field.
pub fn run_simp(
    filter: &DensityFilter,
    objective: &mut dyn SimpObjective,
    start: &[f64],
    settings: &SimpSettings,
) -> Result<SimpOutcome> {
    let n = start.len();
    let mut x: Vec<f64> = start.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let mut x_phys = x.clone();
    let mut history = OptHistory::default();
    let dv = filter.backpropagate(&vec![1.0; n]);
    let mut converged = false;
    for it in 0..settings.max_iter.max(1) {
        let (objectives, grad) = match objective.evaluate(&x_phys) {
            Ok(v) => v,
            Err(source) => {
                return Err(Error::Interrupted { history: Box::new(history), source: Box::new(source) })
            }
        };
        history.push(objectives);
        if converged || it + 1 == settings.max_iter {
            break;
        }
        let dc = filter.backpropagate(&grad);
        let step = oc_update(&x, &dc, &dv, settings.volfrac, filter, &settings.oc);
        converged = step.change < settings.tol;
        x = step.x;
        x_phys = step.x_phys;
    }
    history.converged = converged;
    Ok(SimpOutcome { x_phys, history })
}
