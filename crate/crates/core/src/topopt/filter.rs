//! Cone-weighted density filter.

use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::Mesh;
use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::problem::Grid;

/// `x̃_i = Σ_j H_ij x_j / Σ_j H_ij` with `H_ij = max(0, rmin − dist(i, j))`.
#[derive(Debug, Clone)]
pub struct DensityFilter {
    h: CsrMatrix<f64>,
    hs: Vec<f64>,
}

impl DensityFilter {
    pub fn new(mesh: Mesh, rmin: f64) -> Self {
        assert!(rmin > 0.0, "filter radius must be positive");
        let (nelx, nely) = (mesh.nelx as isize, mesh.nely as isize);
        let reach = (rmin.ceil() as isize - 1).max(0);
        let mut b = TripletBuilder::with_capacity(
            mesh.n_elements(),
            mesh.n_elements(),
            mesh.n_elements() * ((2 * reach + 1) * (2 * reach + 1)) as usize,
        );
        for i1 in 0..nelx {
            for j1 in 0..nely {
                let e1 = (i1 * nely + j1) as usize;
                for i2 in (i1 - reach).max(0)..(i1 + reach + 1).min(nelx) {
                    for j2 in (j1 - reach).max(0)..(j1 + reach + 1).min(nely) {
                        let d = (((i1 - i2).pow(2) + (j1 - j2).pow(2)) as f64).sqrt();
                        let w = rmin - d;
                        if w > 0.0 {
                            b.push(e1, (i2 * nely + j2) as usize, w);
                        }
                    }
                }
            }
        }
        let h = b.build();
        let hs = h.mul_vec(&alloc::vec![1.0; mesh.n_elements()]);
        Self { h, hs }
    }

    /// Filters a field given in element order.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.h.mul_vec(x);
        for (v, s) in y.iter_mut().zip(&self.hs) {
            *v /= s;
        }
        y
    }

    /// Chain rule through the filter: maps `∂f/∂x̃` to `∂f/∂x`.
    pub fn backpropagate(&self, g: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = g.iter().zip(&self.hs).map(|(g, s)| g / s).collect();
        self.h.mul_transpose_vec(&scaled)
    }

    pub fn weights(&self) -> &CsrMatrix<f64> {
        &self.h
    }
}

/// Filters a row-major density grid with cone radius `rmin`.
pub fn density_filter(field: &Grid, rmin: f64) -> Grid {
    let mesh = Mesh::new(field.nelx, field.nely);
    let f = DensityFilter::new(mesh, rmin);
    let out = f.apply(&field.to_column_major());
    Grid::from_column_major(field.nely, field.nelx, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Brute-force filter over all element pairs.
    fn brute(field: &Grid, rmin: f64) -> Grid {
        let mut out = Grid::filled(field.nely, field.nelx, 0.0);
        for r in 0..field.nely {
            for c in 0..field.nelx {
                let (mut num, mut den) = (0.0, 0.0);
                for r2 in 0..field.nely {
                    for c2 in 0..field.nelx {
                        let d = (((r as f64 - r2 as f64).powi(2)) + ((c as f64 - c2 as f64).powi(2))).sqrt();
                        let w = (rmin - d).max(0.0);
                        num += w * field.at(r2, c2);
                        den += w;
                    }
                }
                out.data[r * field.nelx + c] = num / den;
            }
        }
        out
    }

    #[test]
    fn small_radius_is_identity() {
        let g = Grid::new(2, 3, vec![0.1, 0.9, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(density_filter(&g, 1.0).data, g.data);
        assert_eq!(density_filter(&g, 0.5).data, g.data);
    }

    #[test]
    fn constant_field_unchanged() {
        let g = Grid::filled(6, 7, 0.42);
        for v in density_filter(&g, 2.4).data {
            assert!((v - 0.42).abs() < 1e-15);
        }
    }

    #[test]
    fn spike_matches_hand_computed_cone_weights() {
        let mut g = Grid::filled(5, 5, 0.0);
        g.data[12] = 1.0;
        let out = density_filter(&g, 1.5);
        // interior normalization: self 1.5, four edge neighbours 0.5, four
        // diagonal neighbours 1.5 - sqrt(2)
        let diag = 1.5 - 2f64.sqrt();
        let hs = 1.5 + 4.0 * 0.5 + 4.0 * diag;
        assert!((out.at(2, 2) - 1.5 / hs).abs() < 1e-14);
        for (r, c) in [(1, 2), (3, 2), (2, 1), (2, 3)] {
            assert!((out.at(r, c) - 0.5 / hs).abs() < 1e-14);
        }
        for (r, c) in [(1, 1), (1, 3), (3, 1), (3, 3)] {
            assert!((out.at(r, c) - diag / hs).abs() < 1e-14);
        }
        assert_eq!(out.at(0, 2), 0.0);
    }

    #[test]
    fn matches_brute_force() {
        let data: Vec<f64> = (0..48).map(|i| ((i * 37) % 11) as f64 / 10.0).collect();
        let g = Grid::new(6, 8, data).unwrap();
        for rmin in [1.2, 1.5, 2.4, 3.0] {
            let a = density_filter(&g, rmin);
            let b = brute(&g, rmin);
            for (x, y) in a.data.iter().zip(&b.data) {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn backpropagate_is_adjoint_of_apply() {
        let mesh = Mesh::new(5, 4);
        let f = DensityFilter::new(mesh, 2.0);
        let x: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
        let g: Vec<f64> = (0..20).map(|i| (i as f64 * 0.11).cos()).collect();
        let lhs: f64 = f.apply(&x).iter().zip(&g).map(|(a, b)| a * b).sum();
        let rhs: f64 = f.backpropagate(&g).iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-13);
    }
}
