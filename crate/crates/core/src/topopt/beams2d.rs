//! Compliance minimization of the half MBB beam.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;

use super::{compliance_structural, run_simp, DensityFilter, ElasticBoundary, ElasticMaterial, Mesh, SimpSettings};
use crate::problem::{
    Conditions, ConstraintRow, Design, DesignSpace, Direction, Grid, Interval, OptHistory, Problem, ProblemSpec,
    Quantity, SeedState,
};
use crate::{Error, Result};

/// Slack on the `mean ≤ volfrac` relation so optimizer output passes it.
pub(crate) const VOLUME_SLACK: f64 = 1e-3;

/// Half MBB beam on an `nelx × nely` grid, minimizing compliance under a
/// volume fraction bound.
#[derive(Debug, Clone)]
pub struct Beams2D {
    spec: ProblemSpec,
    mesh: Mesh,
    seed: SeedState,
    pub material: ElasticMaterial,
    pub max_iter: usize,
}

impl Default for Beams2D {
    fn default() -> Self {
        Self::new(100, 50)
    }
}

impl Beams2D {
    pub fn new(nelx: usize, nely: usize) -> Self {
        let spec = ProblemSpec::new("beams2d", 0, DesignSpace::uniform(0.0, 1.0, vec![nely, nelx]))
            .objective("compliance", Direction::Minimize)
            .condition("volfrac", 0.35)
            .condition("rmin", 2.0)
            .condition("forcedist", 0.0)
            .condition("overhang_constraint", 0.0);
        Self { spec, mesh: Mesh::new(nelx, nely), seed: SeedState::default(), material: Default::default(), max_iter: 2000 }
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    fn field(&self, design: &Design) -> Result<Vec<f64>> {
        grid_field(design, self.mesh)
    }
}

pub(crate) fn grid_field(design: &Design, mesh: Mesh) -> Result<Vec<f64>> {
    match design.as_grid() {
        Some(g) if g.nelx == mesh.nelx && g.nely == mesh.nely => Ok(g.to_column_major()),
        _ => Err(Error::invalid("design does not match the problem grid")),
    }
}

pub(crate) fn grid_design(mesh: Mesh, x: &[f64]) -> Design {
    Design::Grid(Grid::from_column_major(mesh.nely, mesh.nelx, x))
}

pub(crate) fn size_parameters(mesh: Mesh) -> Vec<(String, f64)> {
    vec![("nelx".to_string(), mesh.nelx as f64), ("nely".to_string(), mesh.nely as f64)]
}

impl Problem for Beams2D {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        size_parameters(self.mesh)
    }

    fn constraint_rows(&self, conds: &Conditions) -> Vec<ConstraintRow> {
        let q = Quantity::config;
        let half_span = 0.5 * self.mesh.nelx.max(self.mesh.nely) as f64;
        vec![
            ConstraintRow::theory_error(Quantity::DesignEntries, Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("nelx"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("nely"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("volfrac"), Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("rmin"), Interval::greater_than(0.0)),
            ConstraintRow::theory_error(q("forcedist"), Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_warning(
                Quantity::DesignMean,
                Interval::closed(0.0, conds.value("volfrac") + VOLUME_SLACK),
            ),
            ConstraintRow::impl_error(q("rmin"), Interval::open(0.0, half_span)),
            ConstraintRow::impl_warning(q("nelx"), Interval::closed(10.0, 1000.0)).integer(),
            ConstraintRow::impl_warning(q("nely"), Interval::closed(10.0, 1000.0)).integer(),
            ConstraintRow::impl_warning(q("volfrac"), Interval::closed(0.1, 0.9)),
            ConstraintRow::impl_warning(q("rmin"), Interval::closed(1.0, 10.0)),
        ]
    }

    fn evaluate(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<f64>> {
        let x = self.field(design)?;
        let bc = ElasticBoundary::mbb_half(self.mesh, conds.value("forcedist"));
        let (c, _) = compliance_structural(self.mesh, &self.material, &x, &bc)?;
        Ok(vec![c])
    }

    /// Uniform density at the volume target.
    fn initial_design(&self, conds: &Conditions) -> Design {
        let [nely, nelx] = self.spec.design_space.shape[..] else { unreachable!() };
        Design::Grid(Grid::filled(nely, nelx, conds.value("volfrac")))
    }

    fn run_optimizer(&mut self, start: &Design, conds: &Conditions) -> Result<(Design, OptHistory)> {
        let x0 = self.field(start)?;
        let rmin = conds.value("rmin");
        if !(rmin > 0.0) {
            return Err(Error::invalid("rmin must be positive"));
        }
        let mesh = self.mesh;
        let material = self.material;
        let bc = ElasticBoundary::mbb_half(mesh, conds.value("forcedist"));
        let filter = DensityFilter::new(mesh, rmin);
        let mut objective = |x: &[f64]| {
            let (c, dc) = compliance_structural(mesh, &material, x, &bc)?;
            Ok((vec![c], dc))
        };
        let mut settings = SimpSettings::new(conds.value("volfrac"));
        settings.max_iter = self.max_iter;
        let out = run_simp(&filter, &mut objective, &x0, &settings)?;
        Ok((grid_design(mesh, &out.x_phys), out.history))
    }

    fn seed_state(&mut self) -> &mut SeedState {
        &mut self.seed
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
