//! Heat-sink design on the unit square: conductive material is distributed to
//! minimize thermal compliance under uniform heating, with a zero-temperature
//! sink segment centered on the bottom edge and adiabatic walls elsewhere.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;

use super::beams2d::{grid_design, grid_field, VOLUME_SLACK};
use super::{compliance_thermal, run_simp, solve_thermal, DensityFilter, Mesh, SimpSettings, ThermalBoundary, ThermalMaterial};
use crate::problem::{
    Conditions, ConstraintRow, Design, DesignSpace, Direction, Grid, Interval, OptHistory, Problem, ProblemSpec,
    Quantity, SeedState,
};
use crate::Result;

#[derive(Debug, Clone)]
pub struct HeatConduction2D {
    spec: ProblemSpec,
    mesh: Mesh,
    seed: SeedState,
    pub material: ThermalMaterial,
    /// Volumetric heat source per unit area.
    pub source: f64,
    /// Weight of the density-gradient penalty in the objective.
    pub regularization: f64,
    /// Density filter radius in elements.
    pub filter_radius: f64,
    pub max_iter: usize,
}

impl Default for HeatConduction2D {
    fn default() -> Self {
        Self::new(101)
    }
}

impl HeatConduction2D {
    /// `resolution` elements per side.
    pub fn new(resolution: usize) -> Self {
        let spec = ProblemSpec::new("heatconduction2d", 0, DesignSpace::uniform(0.0, 1.0, vec![resolution, resolution]))
            .objective("thermal_compliance", Direction::Minimize)
            .condition("volume", 0.5)
            .condition("length", 0.5);
        Self {
            spec,
            mesh: Mesh::new(resolution, resolution),
            seed: SeedState::default(),
            material: ThermalMaterial::default(),
            source: 1e-2,
            regularization: 0.0,
            filter_radius: 2.0,
            max_iter: 2000,
        }
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn resolution(&self) -> usize {
        self.mesh.nelx
    }

    /// Bottom-edge nodes within `length / 2` of the midpoint; the node(s)
    /// closest to the midpoint always belong to the sink.
    pub fn sink_nodes(&self, length: f64) -> Vec<usize> {
        let n = self.resolution();
        let half = 0.5 * length.clamp(0.0, 1.0);
        let center_lo = n / 2;
        let center_hi = (n + 1) / 2;
        (0..=n)
            .filter(|&ix| {
                let x = ix as f64 / n as f64;
                (x - 0.5).abs() <= half + 1e-12 || ix == center_lo || ix == center_hi
            })
            .map(|ix| self.mesh.node(ix, n))
            .collect()
    }

    pub fn boundary(&self, conds: &Conditions) -> ThermalBoundary {
        let h = 1.0 / self.resolution() as f64;
        ThermalBoundary::uniform_source(self.mesh, self.source, h, self.sink_nodes(conds.value("length")))
    }
}

impl Problem for HeatConduction2D {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![("resolution".to_string(), self.resolution() as f64)]
    }

    fn constraint_rows(&self, conds: &Conditions) -> Vec<ConstraintRow> {
        let q = Quantity::config;
        vec![
            ConstraintRow::theory_error(Quantity::DesignEntries, Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("resolution"), Interval::at_least(1.0)).integer(),
            ConstraintRow::theory_error(q("volume"), Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_error(q("length"), Interval::closed(0.0, 1.0)),
            ConstraintRow::theory_warning(
                Quantity::DesignMean,
                Interval::closed(0.0, conds.value("volume") + VOLUME_SLACK),
            ),
            ConstraintRow::impl_warning(q("resolution"), Interval::closed(10.0, 1000.0)).integer(),
            ConstraintRow::impl_warning(q("volume"), Interval::closed(0.3, 0.6)),
        ]
    }

    fn evaluate(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<f64>> {
        let x = grid_field(design, self.mesh)?;
        let bc = self.boundary(conds);
        let (c, _) = compliance_thermal(self.mesh, &self.material, &x, &bc, self.regularization)?;
        Ok(vec![c])
    }

    /// Uniform density at the volume target.
    fn initial_design(&self, conds: &Conditions) -> Design {
        let [nely, nelx] = self.spec.design_space.shape[..] else { unreachable!() };
        Design::Grid(Grid::filled(nely, nelx, conds.value("volume")))
    }

    fn run_optimizer(&mut self, start: &Design, conds: &Conditions) -> Result<(Design, OptHistory)> {
        let x0 = grid_field(start, self.mesh)?;
        let (mesh, material, alpha) = (self.mesh, self.material, self.regularization);
        let bc = self.boundary(conds);
        let filter = DensityFilter::new(mesh, self.filter_radius);
        let mut objective = |x: &[f64]| {
            let (c, dc) = compliance_thermal(mesh, &material, x, &bc, alpha)?;
            Ok((vec![c], dc))
        };
        let mut settings = SimpSettings::new(conds.value("volume"));
        settings.max_iter = self.max_iter;
        let out = run_simp(&filter, &mut objective, &x0, &settings)?;
        Ok((grid_design(mesh, &out.x_phys), out.history))
    }

    fn seed_state(&mut self) -> &mut SeedState {
        &mut self.seed
    }

    /// Element-averaged temperature.
    fn diagnostic_fields(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<(String, Grid)>> {
        let x = grid_field(design, self.mesh)?;
        let t = solve_thermal(self.mesh, &self.material, &x, &self.boundary(conds))?.temperature;
        let avg: Vec<f64> = (0..self.mesh.n_elements())
            .map(|e| self.mesh.element_nodes(e).iter().map(|&n| t[n]).sum::<f64>() / 4.0)
            .collect();
        Ok(vec![("temperature".to_string(), Grid::from_column_major(self.mesh.nely, self.mesh.nelx, &avg))])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
