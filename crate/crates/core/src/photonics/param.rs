//! Material parameterization: circular blur followed by tanh projection.

use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::problem::Grid;

/// Projection strength `beta`, threshold `eta` and blur radius in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionParams {
    pub beta: f64,
    pub eta: f64,
    pub blur_radius: f64,
}

impl ProjectionParams {
    pub fn new(beta: f64, blur_radius: f64) -> Self {
        Self { beta, eta: 0.5, blur_radius }
    }
}

/// `(tanh(βη) + tanh(β(y − η))) / (tanh(βη) + tanh(β(1 − η)))`
pub fn tanh_projection(y: f64, beta: f64, eta: f64) -> f64 {
    let den = (beta * eta).tanh() + (beta * (1.0 - eta)).tanh();
    ((beta * eta).tanh() + (beta * (y - eta)).tanh()) / den
}

pub fn tanh_projection_derivative(y: f64, beta: f64, eta: f64) -> f64 {
    let den = (beta * eta).tanh() + (beta * (1.0 - eta)).tanh();
    let t = (beta * (y - eta)).tanh();
    beta * (1.0 - t * t) / den
}

/// Averaging over the pixels within `radius` of each pixel (the disk
/// `dx² + dy² ≤ r²`), normalized by the weight that falls inside the grid.
#[derive(Debug, Clone)]
pub struct DiskBlur {
    w: CsrMatrix<f64>,
}

impl DiskBlur {
    /// Operates on row-major `nely × nelx` fields.
    pub fn new(nely: usize, nelx: usize, radius: f64) -> Self {
        let r = radius.max(0.0);
        let reach = r.floor() as isize;
        let n = nely * nelx;
        let mut b = TripletBuilder::with_capacity(n, n, n * ((2 * reach + 1) * (2 * reach + 1)) as usize);
        for row in 0..nely as isize {
            for col in 0..nelx as isize {
                let i = (row * nelx as isize + col) as usize;
                let mut cells = Vec::new();
                for dr in -reach..=reach {
                    for dc in -reach..=reach {
                        let (r2, c2) = (row + dr, col + dc);
                        if ((dr * dr + dc * dc) as f64) <= r * r + 1e-12
                            && r2 >= 0
                            && c2 >= 0
                            && r2 < nely as isize
                            && c2 < nelx as isize
                        {
                            cells.push((r2 * nelx as isize + c2) as usize);
                        }
                    }
                }
                let w = 1.0 / cells.len() as f64;
                for j in cells {
                    b.push(i, j, w);
                }
            }
        }
        Self { w: b.build() }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.w.mul_vec(x)
    }

    /// Maps a gradient with respect to the blurred field back to the input.
    pub fn backpropagate(&self, g: &[f64]) -> Vec<f64> {
        self.w.mul_transpose_vec(g)
    }
}

/// Blurs then projects a density grid.
pub fn project(x: &Grid, params: &ProjectionParams) -> Grid {
    let blur = DiskBlur::new(x.nely, x.nelx, params.blur_radius);
    let data = blur.apply(&x.data).into_iter().map(|y| tanh_projection(y, params.beta, params.eta)).collect();
    Grid { nely: x.nely, nelx: x.nelx, data }
}

/// Quadratic continuation of the projection strength over `total_iters`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationSchedule {
    pub beta_start: f64,
    pub beta_end: f64,
    pub total_iters: usize,
}

impl ContinuationSchedule {
    pub fn new(total_iters: usize) -> Self {
        Self { beta_start: 1.0, beta_end: 300.0, total_iters }
    }

    /// `β(t) = β_start + (β_end − β_start)·(t / (T − 1))²`
    pub fn beta(&self, t: usize) -> f64 {
        if self.total_iters <= 1 {
            return self.beta_end;
        }
        if t + 1 >= self.total_iters {
            return self.beta_end;
        }
        let s = t as f64 / (self.total_iters - 1) as f64;
        self.beta_start + (self.beta_end - self.beta_start) * s * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn projection_midpoint_and_saturation() {
        for beta in [1.0, 8.0, 300.0] {
            assert_eq!(tanh_projection(0.5, beta, 0.5), 0.5);
            assert_eq!(tanh_projection(0.0, beta, 0.5), 0.0);
            assert!((tanh_projection(1.0, beta, 0.5) - 1.0).abs() < 1e-15);
        }
        assert!(tanh_projection(0.9, 300.0, 0.5) >= 1.0 - 1e-10);
        assert!(tanh_projection_derivative(0.9, 300.0, 0.5).abs() <= 1e-8);
    }

    #[test]
    fn projection_derivative_matches_differences() {
        for &(y, beta) in &[(0.3, 1.0), (0.55, 10.0), (0.8, 4.0)] {
            let h = 1e-6;
            let fd = (tanh_projection(y + h, beta, 0.5) - tanh_projection(y - h, beta, 0.5)) / (2.0 * h);
            assert!((fd - tanh_projection_derivative(y, beta, 0.5)).abs() < 1e-7);
        }
    }

    #[test]
    fn blur_of_spike_matches_disk_average() {
        let mut x = vec![0.0; 49];
        x[24] = 1.0;
        let b = DiskBlur::new(7, 7, 1.0);
        let y = b.apply(&x);
        // radius one: the plus-shaped five-pixel disk, all fully inside
        for i in [24, 17, 31, 23, 25] {
            assert!((y[i] - 0.2).abs() < 1e-15);
        }
        assert_eq!(y[16], 0.0);
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        // a corner pixel only sees three in-bounds neighbours
        let mut c = vec![0.0; 49];
        c[0] = 1.0;
        assert!((b.apply(&c)[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(DiskBlur::new(7, 7, 0.0).apply(&x), x);
    }

    #[test]
    fn schedule_endpoints_and_midpoint() {
        let s = ContinuationSchedule::new(101);
        assert_eq!(s.beta(0), 1.0);
        assert_eq!(s.beta(100), 300.0);
        assert!((s.beta(50) - (1.0 + 299.0 / 4.0)).abs() < 1e-12);
        assert!((1..101).all(|t| s.beta(t) >= s.beta(t - 1)));
    }
}
