//! Demultiplexer objective and its adjoint gradient.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{tanh_projection, tanh_projection_derivative, DiskBlur, PhotonicsLayout, ProjectionParams};
use crate::Result;

/// Angular frequency for a free-space wavelength (`c = 1`).
pub fn omega_for(lambda: f64) -> f64 {
    2.0 * core::f64::consts::PI / lambda
}

/// Objective value, its parts and (optionally) the gradient with respect to
/// the raw densities.
#[derive(Debug, Clone)]
pub struct DeviceEvaluation {
    pub objective: f64,
    /// Normalized port overlaps `|mₖᵀeₖ|² / E₀ₖ`.
    pub transmissions: [f64; 2],
    pub penalty: f64,
    pub gradient: Option<Vec<f64>>,
    pub fields: Option<[Vec<Complex64>; 2]>,
}

/// Two-wavelength demultiplexer figure of merit
/// `J = T₁·T₂ − w·Σx²/N`, where `Tₖ` is the overlap of the field at
/// wavelength `λₖ` with output port `k`, normalized by the same overlap in a
/// straight reference waveguide.
#[derive(Debug, Clone)]
pub struct Demultiplexer {
    pub layout: PhotonicsLayout,
    pub lambdas: [f64; 2],
    pub penalty_weight: f64,
    reference_power: [f64; 2],
}

impl Demultiplexer {
    pub fn new(layout: PhotonicsLayout, lambdas: [f64; 2], penalty_weight: f64) -> Result<Self> {
        let mut reference_power = [0.0; 2];
        let eps = layout.reference();
        let b = layout.source();
        for k in 0..2 {
            let e = layout.grid.solve(&eps, omega_for(lambdas[k]), &b)?;
            reference_power[k] = layout.reference_port.overlap(&layout.grid, &e).norm_sqr();
        }
        Ok(Self { layout, lambdas, penalty_weight, reference_power })
    }

    pub fn reference_power(&self) -> [f64; 2] {
        self.reference_power
    }

    /// Evaluates a row-major `nely × nelx` density `x`.
    pub fn evaluate(
        &self,
        x: &[f64],
        params: &ProjectionParams,
        gradient: bool,
        keep_fields: bool,
    ) -> Result<DeviceEvaluation> {
        let l = &self.layout;
        let n = l.nelx * l.nely;
        assert_eq!(x.len(), n, "design size");
        let blur = DiskBlur::new(l.nely, l.nelx, params.blur_radius);
        let y = blur.apply(x);
        let yhat: Vec<f64> = y.iter().map(|&v| tanh_projection(v, params.beta, params.eta)).collect();
        let eps = l.permittivity(&yhat);
        let b = l.source();

        let mut t = [0.0; 2];
        let mut overlaps = [Complex64::new(0.0, 0.0); 2];
        let mut fields: [Vec<Complex64>; 2] = [Vec::new(), Vec::new()];
        let mut systems = Vec::with_capacity(2);
        for k in 0..2 {
            let omega = omega_for(self.lambdas[k]);
            let sys = l.grid.factor(&eps, omega)?;
            let e = sys.solve_source(&b)?;
            overlaps[k] = l.outputs[k].overlap(&l.grid, &e);
            t[k] = overlaps[k].norm_sqr() / self.reference_power[k];
            fields[k] = e;
            systems.push(sys);
        }
        let penalty = self.penalty_weight * x.iter().map(|v| v * v).sum::<f64>() / n as f64;
        let objective = t[0] * t[1] - penalty;

        let grad = if gradient {
            // dJ/dε_p accumulated over both wavelengths
            let mut d_eps = vec![0.0; n];
            for k in 0..2 {
                let omega = omega_for(self.lambdas[k]);
                let mut m = vec![Complex64::new(0.0, 0.0); l.grid.len()];
                for (c, v) in l.outputs[k].cells(&l.grid) {
                    m[c] = Complex64::new(v, 0.0);
                }
                let v = systems[k].solve_transpose(&m)?;
                let other = t[1 - k];
                let scale = other / self.reference_power[k];
                let e = &fields[k];
                for row in 0..l.nely {
                    for col in 0..l.nelx {
                        let p = l.design_cell(row, col);
                        let d_overlap = -omega * omega * v[p] * e[p];
                        d_eps[row * l.nelx + col] += scale * 2.0 * (overlaps[k].conj() * d_overlap).re;
                    }
                }
            }
            let span = l.eps_hi - l.eps_lo;
            let d_y: Vec<f64> = d_eps
                .iter()
                .zip(&y)
                .map(|(g, &yv)| g * span * tanh_projection_derivative(yv, params.beta, params.eta))
                .collect();
            let mut g = blur.backpropagate(&d_y);
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi -= 2.0 * self.penalty_weight * xi / n as f64;
            }
            Some(g)
        } else {
            None
        };
        Ok(DeviceEvaluation {
            objective,
            transmissions: t,
            penalty,
            gradient: grad,
            fields: if keep_fields { Some(fields) } else { None },
        })
    }
}
