//! Assembly and solves for the SIMP physics.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::elements::{element_conduction, element_stiffness, element_thermal_coupling, quad_form};
use super::Mesh;
use crate::linalg::{solve_spd, CsrMatrix, TripletBuilder};
use crate::{Error, Result};

const SOLVE_TOL: f64 = 1e-10;

/// SIMP-interpolated isotropic elastic material, `E(x) = Emin + xᵖ (E0 − Emin)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMaterial {
    pub e0: f64,
    pub emin: f64,
    pub nu: f64,
    pub penal: f64,
}

impl Default for ElasticMaterial {
    fn default() -> Self {
        Self { e0: 1.0, emin: 1e-9, nu: 0.3, penal: 3.0 }
    }
}

impl ElasticMaterial {
    pub fn modulus(&self, x: f64) -> f64 {
        self.emin + x.powf(self.penal) * (self.e0 - self.emin)
    }

    pub fn modulus_derivative(&self, x: f64) -> f64 {
        self.penal * x.powf(self.penal - 1.0) * (self.e0 - self.emin)
    }
}

/// SIMP-interpolated conductivity, `k(x) = kmin + xᵖ (kmax − kmin)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMaterial {
    pub kmax: f64,
    pub kmin: f64,
    pub penal: f64,
}

impl Default for ThermalMaterial {
    fn default() -> Self {
        Self { kmax: 1.0, kmin: 1e-3, penal: 3.0 }
    }
}

impl ThermalMaterial {
    pub fn conductivity(&self, x: f64) -> f64 {
        self.kmin + x.powf(self.penal) * (self.kmax - self.kmin)
    }

    pub fn conductivity_derivative(&self, x: f64) -> f64 {
        self.penal * x.powf(self.penal - 1.0) * (self.kmax - self.kmin)
    }
}

/// Supports and nodal forces for a plane-stress problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticBoundary {
    pub fixed_dofs: Vec<usize>,
    /// Full-length nodal force vector.
    pub forces: Vec<f64>,
}

impl ElasticBoundary {
    /// Half MBB beam: unit vertical load on the top edge at `forcedist`
    /// (fraction of the span from the symmetry line), x-symmetry on the left
    /// edge and a roller at the bottom-right corner.
    pub fn mbb_half(mesh: Mesh, forcedist: f64) -> Self {
        let ix = ((forcedist.clamp(0.0, 1.0) * mesh.nelx as f64).round() as usize).min(mesh.nelx);
        let mut forces = vec![0.0; mesh.n_dofs()];
        forces[2 * mesh.node(ix, 0) + 1] = -1.0;
        let mut fixed: Vec<usize> = (0..=mesh.nely).map(|iy| 2 * mesh.node(0, iy)).collect();
        fixed.push(mesh.n_dofs() - 1);
        Self { fixed_dofs: fixed, forces }
    }
}

/// Heat sinks (zero-temperature nodes) and nodal heat loads.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalBoundary {
    pub sink_nodes: Vec<usize>,
    pub loads: Vec<f64>,
}

impl ThermalBoundary {
    /// Uniform volumetric source `q` over elements of side `h`, lumped to nodes.
    pub fn uniform_source(mesh: Mesh, q: f64, h: f64, sink_nodes: Vec<usize>) -> Self {
        let mut loads = vec![0.0; mesh.n_nodes()];
        let share = q * h * h / 4.0;
        for e in 0..mesh.n_elements() {
            for n in mesh.element_nodes(e) {
                loads[n] += share;
            }
        }
        Self { sink_nodes, loads }
    }
}

fn assemble<const N: usize>(
    n: usize,
    mesh: Mesh,
    ke: &[f64],
    dofs: impl Fn(usize) -> [usize; N],
    coef: &[f64],
) -> CsrMatrix<f64> {
    let mut b = TripletBuilder::with_capacity(n, n, mesh.n_elements() * N * N);
    for (e, &c) in coef.iter().enumerate() {
        let d = dofs(e);
        for i in 0..N {
            for j in 0..N {
                b.push(d[i], d[j], c * ke[i * N + j]);
            }
        }
    }
    b.build()
}

/// Solves `K u = f` with `u = 0` on `fixed`, returning the full vector.
fn solve_constrained(k: &CsrMatrix<f64>, f: &[f64], fixed: &[usize]) -> Result<Vec<f64>> {
    let free = Mesh::free_indices(k.nrows(), fixed);
    let kr = k.submatrix(&free);
    let fr: Vec<f64> = free.iter().map(|&i| f[i]).collect();
    let ur = solve_spd(&kr, &fr, SOLVE_TOL)?;
    let mut u = vec![0.0; k.nrows()];
    for (&i, v) in free.iter().zip(ur) {
        u[i] = v;
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("non-finite solution".into()));
    }
    Ok(u)
}

fn check_field(mesh: Mesh, x: &[f64]) -> Result<()> {
    if x.len() != mesh.n_elements() {
        return Err(Error::invalid(format!(
            "density field has {} entries, mesh has {} elements",
            x.len(),
            mesh.n_elements()
        )));
    }
    Ok(())
}

fn element_vec<const N: usize>(u: &[f64], d: [usize; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = u[d[i]];
    }
    out
}

/// Static elastic state for a density field.
#[derive(Debug, Clone)]
pub struct ElasticState {
    pub displacement: Vec<f64>,
    /// `uₑᵀ k₀ uₑ` per element.
    pub element_energy: Vec<f64>,
    pub compliance: f64,
}

/// Assembles and solves the plane-stress problem for densities `x`
/// (element order). Needs at least three fixed dofs.
pub fn solve_elastic(mesh: Mesh, mat: &ElasticMaterial, x: &[f64], bc: &ElasticBoundary) -> Result<ElasticState> {
    solve_elastic_with_load(mesh, mat, x, &bc.fixed_dofs, &bc.forces)
}

fn solve_elastic_with_load(
    mesh: Mesh,
    mat: &ElasticMaterial,
    x: &[f64],
    fixed: &[usize],
    forces: &[f64],
) -> Result<ElasticState> {
    check_field(mesh, x)?;
    if fixed.len() < 3 {
        return Err(Error::Singular(format!(
            "only {} fixed dof(s); at least 3 are needed to remove rigid-body modes",
            fixed.len()
        )));
    }
    let ke = element_stiffness(mat.nu);
    let coef: Vec<f64> = x.iter().map(|&v| mat.modulus(v)).collect();
    let k = assemble::<8>(mesh.n_dofs(), mesh, &ke, |e| mesh.element_dofs(e), &coef);
    let u = solve_constrained(&k, forces, fixed)?;
    let element_energy: Vec<f64> =
        (0..mesh.n_elements()).map(|e| quad_form::<8>(&ke, &element_vec(&u, mesh.element_dofs(e)))).collect();
    let compliance = coef.iter().zip(&element_energy).map(|(c, w)| c * w).sum();
    Ok(ElasticState { displacement: u, element_energy, compliance })
}

/// Compliance `c = Fᵀu` and its derivative with respect to each density.
pub fn compliance_structural(
    mesh: Mesh,
    mat: &ElasticMaterial,
    x: &[f64],
    bc: &ElasticBoundary,
) -> Result<(f64, Vec<f64>)> {
    let s = solve_elastic(mesh, mat, x, bc)?;
    let dc = x.iter().zip(&s.element_energy).map(|(&v, &w)| -mat.modulus_derivative(v) * w).collect();
    Ok((s.compliance, dc))
}

/// Steady conduction state for a density field.
#[derive(Debug, Clone)]
pub struct ThermalState {
    pub temperature: Vec<f64>,
    pub element_energy: Vec<f64>,
    pub compliance: f64,
}

pub fn solve_thermal(mesh: Mesh, mat: &ThermalMaterial, x: &[f64], bc: &ThermalBoundary) -> Result<ThermalState> {
    check_field(mesh, x)?;
    if bc.sink_nodes.is_empty() {
        return Err(Error::Singular("no heat sink: the temperature is undetermined".into()));
    }
    let kt = element_conduction();
    let coef: Vec<f64> = x.iter().map(|&v| mat.conductivity(v)).collect();
    let k = assemble::<4>(mesh.n_nodes(), mesh, &kt, |e| mesh.element_nodes(e), &coef);
    let t = solve_constrained(&k, &bc.loads, &bc.sink_nodes)?;
    let element_energy: Vec<f64> =
        (0..mesh.n_elements()).map(|e| quad_form::<4>(&kt, &element_vec(&t, mesh.element_nodes(e)))).collect();
    let compliance = bc.loads.iter().zip(&t).map(|(f, t)| f * t).sum();
    Ok(ThermalState { temperature: t, element_energy, compliance })
}

/// Thermal compliance `fᵀT` plus the optional gradient penalty
/// `α Σ (xᵢ − xⱼ)²` over edge-adjacent element pairs, with its derivative.
pub fn compliance_thermal(
    mesh: Mesh,
    mat: &ThermalMaterial,
    x: &[f64],
    bc: &ThermalBoundary,
    alpha: f64,
) -> Result<(f64, Vec<f64>)> {
    let s = solve_thermal(mesh, mat, x, bc)?;
    let mut c = s.compliance;
    let mut dc: Vec<f64> =
        x.iter().zip(&s.element_energy).map(|(&v, &w)| -mat.conductivity_derivative(v) * w).collect();
    if alpha != 0.0 {
        for elx in 0..mesh.nelx {
            for ely in 0..mesh.nely {
                let e = mesh.element(elx, ely);
                let mut pair = |o: usize| {
                    let d = x[e] - x[o];
                    c += alpha * d * d;
                    dc[e] += 2.0 * alpha * d;
                    dc[o] -= 2.0 * alpha * d;
                };
                if elx + 1 < mesh.nelx {
                    pair(mesh.element(elx + 1, ely));
                }
                if ely + 1 < mesh.nely {
                    pair(mesh.element(elx, ely + 1));
                }
            }
        }
    }
    Ok((c, dc))
}

/// Coupled thermoelastic model: thermal expansion loads scale with `xᵖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoelasticModel {
    pub elastic: ElasticMaterial,
    pub thermal: ThermalMaterial,
    pub expansion: f64,
    pub reference_temperature: f64,
}

/// Objectives and sensitivities of the coupled problem.
#[derive(Debug, Clone)]
pub struct ThermoelasticState {
    pub structural_compliance: f64,
    pub thermal_compliance: f64,
    pub d_structural: Vec<f64>,
    pub d_thermal: Vec<f64>,
    pub temperature: Vec<f64>,
    pub displacement: Vec<f64>,
}

impl ThermoelasticState {
    /// Total compliance `C = C_T + C_S` and its derivative.
    pub fn total(&self) -> (f64, Vec<f64>) {
        let c = self.thermal_compliance + self.structural_compliance;
        let dc = self.d_structural.iter().zip(&self.d_thermal).map(|(s, t)| s + t).collect();
        (c, dc)
    }
}

/// Solves conduction, then elasticity loaded by mechanical and thermal forces.
/// The structural sensitivity includes the temperature dependence through an
/// adjoint conduction solve.
pub fn solve_thermoelastic(
    mesh: Mesh,
    model: &ThermoelasticModel,
    x: &[f64],
    elastic_bc: &ElasticBoundary,
    thermal_bc: &ThermalBoundary,
) -> Result<ThermoelasticState> {
    check_field(mesh, x)?;
    let th = solve_thermal(mesh, &model.thermal, x, thermal_bc)?;
    let ce = element_thermal_coupling(model.elastic.nu);
    let gain = model.elastic.e0 * model.expansion;
    let p = model.elastic.penal;
    let t_rel = |t: &[f64], e: usize| {
        let mut v = element_vec(t, mesh.element_nodes(e));
        for x in v.iter_mut() {
            *x -= model.reference_temperature;
        }
        v
    };
    let couple = |dt: &[f64; 4]| {
        let mut f = [0.0; 8];
        for i in 0..8 {
            f[i] = gain * (0..4).map(|j| ce[i * 4 + j] * dt[j]).sum::<f64>();
        }
        f
    };

    let mut forces = elastic_bc.forces.clone();
    for e in 0..mesh.n_elements() {
        let fe = couple(&t_rel(&th.temperature, e));
        let s = x[e].powf(p);
        for (i, d) in mesh.element_dofs(e).into_iter().enumerate() {
            forces[d] += s * fe[i];
        }
    }
    let el = solve_elastic_with_load(mesh, &model.elastic, x, &elastic_bc.fixed_dofs, &forces)?;
    let u = &el.displacement;

    // adjoint conduction solve: Kt λ = 2 Gᵀ u with G = ∂F/∂T
    let mut rhs = vec![0.0; mesh.n_nodes()];
    for e in 0..mesh.n_elements() {
        let ue = element_vec(u, mesh.element_dofs(e));
        let s = x[e].powf(p);
        for (j, n) in mesh.element_nodes(e).into_iter().enumerate() {
            let g: f64 = (0..8).map(|i| ce[i * 4 + j] * ue[i]).sum();
            rhs[n] += 2.0 * gain * s * g;
        }
    }
    let adj_bc = ThermalBoundary { sink_nodes: thermal_bc.sink_nodes.clone(), loads: rhs };
    let lambda = solve_thermal(mesh, &model.thermal, x, &adj_bc)?.temperature;

    let kt = element_conduction();
    let mut d_structural = Vec::with_capacity(mesh.n_elements());
    let mut d_thermal = Vec::with_capacity(mesh.n_elements());
    for e in 0..mesh.n_elements() {
        let nodes = mesh.element_nodes(e);
        let te = element_vec(&th.temperature, nodes);
        let le = element_vec(&lambda, nodes);
        let dk = model.thermal.conductivity_derivative(x[e]);
        let mut lkt = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                lkt += le[i] * kt[i * 4 + j] * te[j];
            }
        }
        let ue = element_vec(u, mesh.element_dofs(e));
        let fe = couple(&t_rel(&th.temperature, e));
        let uf: f64 = ue.iter().zip(&fe).map(|(a, b)| a * b).sum();
        let ds = p * x[e].powf(p - 1.0);
        d_structural.push(
            -dk * lkt + 2.0 * ds * uf - model.elastic.modulus_derivative(x[e]) * el.element_energy[e],
        );
        d_thermal.push(-dk * th.element_energy[e]);
    }
    let structural_compliance = forces.iter().zip(u).map(|(f, u)| f * u).sum();
    Ok(ThermoelasticState {
        structural_compliance,
        thermal_compliance: th.compliance,
        d_structural,
        d_thermal,
        temperature: th.temperature,
        displacement: el.displacement,
    })
}
