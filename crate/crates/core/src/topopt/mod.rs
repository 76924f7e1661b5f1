//! Density-based topology optimization: plane-stress compliance, steady heat
//! conduction and their thermoelastic coupling, solved with SIMP and an
//! optimality-criteria update.

mod beams2d;
mod elements;
mod fem;
mod filter;
mod heat2d;
mod mesh;
mod oc;
mod simp;
mod thermoelastic2d;

pub use beams2d::Beams2D;
pub use elements::{element_conduction, element_stiffness, element_thermal_coupling};
pub use fem::{
    compliance_structural, compliance_thermal, solve_elastic, solve_thermal, solve_thermoelastic, ElasticBoundary,
    ElasticMaterial, ElasticState, ThermalBoundary, ThermalMaterial, ThermalState, ThermoelasticModel,
    ThermoelasticState,
};
pub use filter::{density_filter, DensityFilter};
pub use heat2d::HeatConduction2D;
pub use mesh::Mesh;
pub use oc::{oc_update, OcSettings, OcStep};
pub use simp::{run_simp, SimpObjective, SimpOutcome, SimpSettings};
pub use thermoelastic2d::ThermoElasticBeams2D;
