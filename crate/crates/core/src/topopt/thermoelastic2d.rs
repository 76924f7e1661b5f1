//! Coupled thermoelastic beam: heat conducts to sinks on the right edge while
//! the structure carries a point load, and thermal expansion adds load.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;

use super::beams2d::{grid_design, grid_field, size_parameters, VOLUME_SLACK};
use super::{
    run_simp, solve_thermoelastic, DensityFilter, ElasticBoundary, ElasticMaterial, Mesh, SimpSettings,
    ThermalBoundary, ThermalMaterial, ThermoelasticModel,
};
use crate::problem::{
    Conditions, ConstraintRow, Design, DesignSpace, Direction, Grid, Interval, OptHistory, Problem, ProblemSpec,
    Quantity, SeedState,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ThermoElasticBeams2D {
    spec: ProblemSpec,
    mesh: Mesh,
    seed: SeedState,
    pub model: ThermoelasticModel,
    /// Heat generated per element.
    pub source: f64,
    pub max_iter: usize,
}

impl Default for ThermoElasticBeams2D {
    fn default() -> Self {
        Self::new(64, 64)
    }
}

fn fraction_index(f: f64, n: usize) -> usize {
    ((f.clamp(0.0, 1.0) * n as f64).floor() as usize).min(n - 1)
}

impl ThermoElasticBeams2D {
    pub fn new(nelx: usize, nely: usize) -> Self {
        let spec = ProblemSpec::new("thermoelasticbeams2d", 0, DesignSpace::uniform(0.0, 1.0, vec![nely, nelx]))
            .objective("total_compliance", Direction::Minimize)
            .objective("thermal_compliance", Direction::Minimize)
            .objective("structural_compliance", Direction::Minimize)
            .condition("volfrac", 0.3)
            .condition("rmin", 1.5)
            .condition("load_x", 0.5)
            .condition("fixed_left_y", 0.5)
            .condition("fixed_top_x", 0.5)
            .condition("sink_y", 0.5)
            .condition("sink_length", 0.25);
        let model = ThermoelasticModel {
            elastic: ElasticMaterial::default(),
            thermal: ThermalMaterial::default(),
            expansion: 1e-3,
            reference_temperature: 0.0,
        };
        Self { spec, mesh: Mesh::new(nelx, nely), seed: SeedState::default(), model, source: 1e-2, max_iter: 2000 }
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    /// Dataset-style boundary conditions: a unit downward load on one
    /// bottom-edge node, one fully clamped element on each of the left and
    /// top edges, and sink elements along the right edge.
    pub fn boundaries(&self, conds: &Conditions) -> (ElasticBoundary, ThermalBoundary) {
        let m = self.mesh;
        let mut forces = vec![0.0; m.n_dofs()];
        let ix = (conds.value("load_x").clamp(0.0, 1.0) * m.nelx as f64).round() as usize;
        forces[2 * m.node(ix.min(m.nelx), m.nely) + 1] = 1.0;
        let left = m.element(0, fraction_index(conds.value("fixed_left_y"), m.nely));
        let top = m.element(fraction_index(conds.value("fixed_top_x"), m.nelx), 0);
        let mut fixed: Vec<usize> = m.element_dofs(left).into_iter().chain(m.element_dofs(top)).collect();
        fixed.sort_unstable();
        fixed.dedup();

        let (cy, half) = (conds.value("sink_y"), 0.5 * conds.value("sink_length").max(0.0));
        let nearest = fraction_index(cy, m.nely);
        let mut sinks: Vec<usize> = (0..m.nely)
            .filter(|&ely| {
                let y = (ely as f64 + 0.5) / m.nely as f64;
                (y - cy).abs() <= half || ely == nearest
            })
            .flat_map(|ely| m.element_nodes(m.element(m.nelx - 1, ely)))
            .collect();
        sinks.sort_unstable();
        sinks.dedup();
        let thermal = ThermalBoundary::uniform_source(m, self.source, 1.0, sinks);
        (ElasticBoundary { fixed_dofs: fixed, forces }, thermal)
    }
}

impl Problem for ThermoElasticBeams2D {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        size_parameters(self.mesh)
    }

    fn constraint_rows(&self, conds: &Conditions) -> Vec<ConstraintRow> {
        let q = Quantity::config;
        let min_side = self.mesh.nelx.min(self.mesh.nely) as f64;
        let mut rows = vec![
            ConstraintRow::theory_error(Quantity::DesignEntries, Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("nelx"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("nely"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("volfrac"), Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("rmin"), Interval::greater_than(0.0)),
        ];
        for name in ["load_x", "fixed_left_y", "fixed_top_x", "sink_y", "sink_length"] {
            rows.push(ConstraintRow::theory_error(q(name), Interval::closed(0.0, 1.0)));
        }
        rows.extend([
            ConstraintRow::theory_warning(
                Quantity::DesignMean,
                Interval::closed(0.0, conds.value("volfrac") + VOLUME_SLACK),
            ),
            ConstraintRow::impl_error(q("rmin"), Interval::open(0.0, min_side)),
            ConstraintRow::impl_warning(q("nelx"), Interval::closed(10.0, 1000.0)).integer(),
            ConstraintRow::impl_warning(q("nely"), Interval::closed(10.0, 1000.0)).integer(),
            ConstraintRow::impl_warning(q("volfrac"), Interval::closed(0.1, 0.9)),
            ConstraintRow::impl_warning(q("rmin"), Interval::closed(1.0, 10.0)),
        ]);
        rows
    }

    fn evaluate(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<f64>> {
        let x = grid_field(design, self.mesh)?;
        let (ebc, tbc) = self.boundaries(conds);
        let s = solve_thermoelastic(self.mesh, &self.model, &x, &ebc, &tbc)?;
        let (c, _) = s.total();
        Ok(vec![c, s.thermal_compliance, s.structural_compliance])
    }

    /// Uniform density at the volume target.
    fn initial_design(&self, conds: &Conditions) -> Design {
        let [nely, nelx] = self.spec.design_space.shape[..] else { unreachable!() };
        Design::Grid(Grid::filled(nely, nelx, conds.value("volfrac")))
    }

    fn run_optimizer(&mut self, start: &Design, conds: &Conditions) -> Result<(Design, OptHistory)> {
        let x0 = grid_field(start, self.mesh)?;
        let rmin = conds.value("rmin");
        if !(rmin > 0.0) {
            return Err(Error::invalid("rmin must be positive"));
        }
        let (mesh, model) = (self.mesh, self.model);
        let (ebc, tbc) = self.boundaries(conds);
        let filter = DensityFilter::new(mesh, rmin);
        let mut objective = |x: &[f64]| {
            let s = solve_thermoelastic(mesh, &model, x, &ebc, &tbc)?;
            let (c, dc) = s.total();
            Ok((vec![c, s.thermal_compliance, s.structural_compliance], dc))
        };
        let mut settings = SimpSettings::new(conds.value("volfrac"));
        settings.max_iter = self.max_iter;
        let out = run_simp(&filter, &mut objective, &x0, &settings)?;
        Ok((grid_design(mesh, &out.x_phys), out.history))
    }

    fn seed_state(&mut self) -> &mut SeedState {
        &mut self.seed
    }

    fn diagnostic_fields(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<(String, Grid)>> {
        let x = grid_field(design, self.mesh)?;
        let (ebc, tbc) = self.boundaries(conds);
        let s = solve_thermoelastic(self.mesh, &self.model, &x, &ebc, &tbc)?;
        let m = self.mesh;
        let avg: Vec<f64> =
            (0..m.n_elements()).map(|e| m.element_nodes(e).iter().map(|&n| s.temperature[n]).sum::<f64>() / 4.0).collect();
        Ok(vec![("temperature".to_string(), Grid::from_column_major(m.nely, m.nelx, &avg))])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
