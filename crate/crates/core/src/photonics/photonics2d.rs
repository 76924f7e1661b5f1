//! Two-wavelength demultiplexer design with β-continuation.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;

use super::{Adam, ContinuationSchedule, Demultiplexer, PhotonicsLayout, ProjectionParams};
use crate::problem::{
    Conditions, ConstraintRow, Design, DesignSpace, Direction, Grid, Interval, OptHistory, Problem, ProblemSpec,
    Quantity, SeedState,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Photonics2D {
    spec: ProblemSpec,
    nelx: usize,
    nely: usize,
    seed: SeedState,
    /// Material penalty weight `w`.
    pub penalty_weight: f64,
    /// Optimizer iterations, also the continuation length.
    pub num_iterations: usize,
    pub step_size: f64,
    pub beta_start: f64,
    pub beta_end: f64,
    cache: Option<([u64; 2], Box<Demultiplexer>)>,
}

impl Default for Photonics2D {
    fn default() -> Self {
        Self::new(120, 120)
    }
}

impl Photonics2D {
    pub fn new(nelx: usize, nely: usize) -> Self {
        let spec = ProblemSpec::new("photonics2d", 0, DesignSpace::uniform(0.0, 1.0, vec![nely, nelx]))
            .objective("c", Direction::Maximize)
            .condition("lambda1", 1.5)
            .condition("lambda2", 1.3)
            .condition("blur_radius", 2.0);
        Self {
            spec,
            nelx,
            nely,
            seed: SeedState::default(),
            penalty_weight: 1e-2,
            num_iterations: 200,
            step_size: 0.05,
            beta_start: 1.0,
            beta_end: 300.0,
            cache: None,
        }
    }

    pub fn layout(&self) -> PhotonicsLayout {
        PhotonicsLayout::new(self.nelx, self.nely)
    }

    pub fn schedule(&self) -> ContinuationSchedule {
        ContinuationSchedule { beta_start: self.beta_start, beta_end: self.beta_end, total_iters: self.num_iterations }
    }

    /// The device model for the given conditions, reusing the reference
    /// normalization when the wavelengths are unchanged.
    pub fn device(&mut self, conds: &Conditions) -> Result<&Demultiplexer> {
        let lambdas = [conds.value("lambda1"), conds.value("lambda2")];
        if lambdas.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::invalid("wavelengths must be positive"));
        }
        let key = [lambdas[0].to_bits(), lambdas[1].to_bits()];
        let fresh = !matches!(&self.cache, Some((k, _)) if *k == key);
        if fresh {
            let layout = self.layout();
            self.cache = Some((key, Box::new(Demultiplexer::new(layout, lambdas, self.penalty_weight)?)));
        }
        let dev = &mut self.cache.as_mut().expect("cache filled").1;
        dev.penalty_weight = self.penalty_weight;
        Ok(dev)
    }

    fn density(&self, design: &Design) -> Result<Vec<f64>> {
        match design.as_grid() {
            Some(g) if g.nelx == self.nelx && g.nely == self.nely => Ok(g.data.clone()),
            _ => Err(Error::invalid("design does not match the problem grid")),
        }
    }

    fn params(&self, conds: &Conditions, beta: f64) -> Result<ProjectionParams> {
        let r = conds.value("blur_radius");
        if !(r >= 0.0) {
            return Err(Error::invalid("blur radius must be non-negative"));
        }
        Ok(ProjectionParams::new(beta, r))
    }
}

impl Problem for Photonics2D {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![("nelx".to_string(), self.nelx as f64), ("nely".to_string(), self.nely as f64)]
    }

    fn constraint_rows(&self, _conds: &Conditions) -> Vec<ConstraintRow> {
        let q = Quantity::config;
        let closed_to_inf = Interval { lo: 0.5, hi: f64::INFINITY, lo_open: false, hi_open: false };
        vec![
            ConstraintRow::theory_error(Quantity::DesignEntries, Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("nelx"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("nely"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("lambda1"), Interval::greater_than(0.0)),
            ConstraintRow::theory_error(q("lambda2"), Interval::greater_than(0.0)),
            ConstraintRow::theory_error(q("blur_radius"), Interval::at_least(0.0)),
            ConstraintRow::impl_error(q("lambda1"), closed_to_inf),
            ConstraintRow::impl_error(q("lambda2"), closed_to_inf),
            ConstraintRow::impl_error(q("blur_radius"), Interval::at_least(0.0)),
            ConstraintRow::impl_error(q("nelx"), Interval::greater_than(60.0)).integer(),
            ConstraintRow::impl_error(q("nely"), Interval::at_least(105.0)).integer(),
            ConstraintRow::impl_warning(q("lambda1"), Interval::closed(0.5, 1.5)),
            ConstraintRow::impl_warning(q("lambda2"), Interval::closed(0.5, 1.5)),
            ConstraintRow::impl_warning(q("blur_radius"), Interval::closed(0.0, 5.0)),
            ConstraintRow::impl_warning(q("nelx"), Interval::closed(90.0, 200.0)).integer(),
            ConstraintRow::impl_warning(q("nely"), Interval::closed(110.0, 300.0)).integer(),
        ]
    }

    /// Objective of the design projected at the final continuation strength.
    fn evaluate(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<f64>> {
        let x = self.density(design)?;
        let params = self.params(conds, self.beta_end)?;
        let dev = self.device(conds)?;
        Ok(vec![dev.evaluate(&x, &params, false, false)?.objective])
    }

    fn run_optimizer(&mut self, start: &Design, conds: &Conditions) -> Result<(Design, OptHistory)> {
        let mut x = self.density(start)?;
        for v in x.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        let schedule = self.schedule();
        let total = schedule.total_iters.max(1);
        let radius = self.params(conds, 1.0)?.blur_radius;
        let mut adam = Adam::new(x.len(), self.step_size);
        let mut history = OptHistory::default();
        let dev = self.device(conds)?.clone();
        for t in 0..total {
            let beta = schedule.beta(t);
            let params = ProjectionParams::new(beta, radius);
            let last = t + 1 == total;
            let eval = match dev.evaluate(&x, &params, !last, false) {
                Ok(e) => e,
                Err(source) => {
                    return Err(Error::Interrupted { history: Box::new(history), source: Box::new(source) })
                }
            };
            history.push(vec![eval.objective]);
            history.continuation.push(beta);
            if let Some(g) = eval.gradient {
                adam.ascend(&mut x, &g, 0.0, 1.0);
            }
        }
        history.converged = true;
        Ok((Design::Grid(Grid { nely: self.nely, nelx: self.nelx, data: x }), history))
    }

    fn seed_state(&mut self) -> &mut SeedState {
        &mut self.seed
    }

    /// Field magnitudes at both wavelengths and the relative permittivity
    /// over the whole simulation domain.
    fn diagnostic_fields(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<(String, Grid)>> {
        let x = self.density(design)?;
        let params = self.params(conds, self.beta_end)?;
        let dev = self.device(conds)?.clone();
        let eval = dev.evaluate(&x, &params, false, true)?;
        let g = dev.layout.grid;
        let to_grid = |v: Vec<f64>| {
            let mut data = vec![0.0; g.len()];
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    // top row of the picture is the largest y
                    data[(g.ny - 1 - iy) * g.nx + ix] = v[g.index(ix, iy)];
                }
            }
            Grid { nely: g.ny, nelx: g.nx, data }
        };
        let [e1, e2] = eval.fields.expect("fields requested");
        let blur = super::DiskBlur::new(self.nely, self.nelx, params.blur_radius);
        let yhat: Vec<f64> =
            blur.apply(&x).into_iter().map(|y| super::tanh_projection(y, params.beta, params.eta)).collect();
        let eps = dev.layout.permittivity(&yhat);
        Ok(vec![
            ("field_lambda1".to_string(), to_grid(e1.iter().map(|c| c.norm()).collect())),
            ("field_lambda2".to_string(), to_grid(e2.iter().map(|c| c.norm()).collect())),
            ("permittivity".to_string(), to_grid(eps)),
        ])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
