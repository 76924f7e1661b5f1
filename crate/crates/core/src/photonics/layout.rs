//! Geometry of the two-port wavelength demultiplexer.
//!
//! A square-ish design region sits between an input waveguide entering from
//! the left edge and two output waveguides leaving through the right edge,
//! a quarter of the design height above and below its center line. PML
//! lines every edge, with a spacing band between PML and design region.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::Fdfd;

/// A vertical line of cells with a normalized mode profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    pub ix: usize,
    pub iy_start: usize,
    pub mode: Vec<f64>,
}

impl Port {
    /// Half-cosine profile over `len` cells centered at `center`, unit norm.
    fn half_cosine(ix: usize, center: usize, len: usize) -> Self {
        let start = center - len / 2;
        let mut mode: Vec<f64> = (0..len)
            .map(|j| {
                let u = (j as f64 + 0.5) / len as f64 - 0.5;
                (core::f64::consts::PI * u).cos()
            })
            .collect();
        let norm = mode.iter().map(|m| m * m).sum::<f64>().sqrt();
        for m in mode.iter_mut() {
            *m /= norm;
        }
        Self { ix, iy_start: start, mode }
    }

    pub fn cells(&self, grid: &Fdfd) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (ix, ny, y0) = (self.ix, grid.ny, self.iy_start);
        self.mode.iter().enumerate().map(move |(j, &m)| (ix * ny + y0 + j, m))
    }

    /// `mᵀ e` over the port cells.
    pub fn overlap(&self, grid: &Fdfd, e: &[Complex64]) -> Complex64 {
        self.cells(grid).map(|(k, m)| e[k] * m).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicsLayout {
    pub nelx: usize,
    pub nely: usize,
    pub grid: Fdfd,
    /// Lower-left cell of the design region.
    pub design_origin: (usize, usize),
    pub eps_lo: f64,
    pub eps_hi: f64,
    pub waveguide_width: usize,
    pub input: Port,
    pub outputs: [Port; 2],
    /// Probe for the straight-waveguide reference run.
    pub reference_port: Port,
}

/// Grid spacing in the same length unit as the wavelengths.
pub const DEFAULT_DL: f64 = 0.04;
pub const DEFAULT_PML: usize = 12;
pub const DEFAULT_SPACE: usize = 8;

impl PhotonicsLayout {
    pub fn new(nelx: usize, nely: usize) -> Self {
        Self::with_margins(nelx, nely, DEFAULT_PML, DEFAULT_SPACE)
    }

    pub fn with_margins(nelx: usize, nely: usize, npml: usize, space: usize) -> Self {
        assert!(nelx >= 4 && nely >= 8, "design region too small for the port layout");
        let pad = npml + space;
        let grid = Fdfd::new(nelx + 2 * pad, nely + 2 * pad, DEFAULT_DL, npml);
        let wg = (nely / 6).clamp(2, 12);
        let yc = pad + nely / 2;
        let port_len = 2 * wg + 1;
        let ix_in = npml + space / 2;
        let ix_out = grid.nx - npml - space / 2 - 1;
        let offset = nely / 4;
        Self {
            nelx,
            nely,
            grid,
            design_origin: (pad, pad),
            eps_lo: 1.0,
            eps_hi: 12.0,
            waveguide_width: wg,
            input: Port::half_cosine(ix_in, yc, port_len),
            outputs: [Port::half_cosine(ix_out, yc + offset, port_len), Port::half_cosine(ix_out, yc - offset, port_len)],
            reference_port: Port::half_cosine(ix_out, yc, port_len),
        }
    }

    fn fill_guide(&self, eps: &mut [f64], xs: core::ops::Range<usize>, center: usize) {
        let lo = center - self.waveguide_width / 2;
        for ix in xs {
            for iy in lo..lo + self.waveguide_width {
                eps[self.grid.index(ix, iy)] = self.eps_hi;
            }
        }
    }

    /// Permittivity with the waveguides in place and an empty design region.
    pub fn background(&self) -> Vec<f64> {
        let mut eps = vec![self.eps_lo; self.grid.len()];
        let (x0, _) = self.design_origin;
        self.fill_guide(&mut eps, 0..x0, self.input_center());
        for p in &self.outputs {
            self.fill_guide(&mut eps, x0 + self.nelx..self.grid.nx, p.iy_start + p.mode.len() / 2);
        }
        eps
    }

    /// A straight waveguide through the whole domain, used to normalize
    /// port overlaps.
    pub fn reference(&self) -> Vec<f64> {
        let mut eps = vec![self.eps_lo; self.grid.len()];
        self.fill_guide(&mut eps, 0..self.grid.nx, self.input_center());
        eps
    }

    fn input_center(&self) -> usize {
        self.input.iy_start + self.input.mode.len() / 2
    }

    /// Grid index of design pixel `(row, col)` of a row-major `nely × nelx`
    /// design.
    pub fn design_cell(&self, row: usize, col: usize) -> usize {
        self.grid.index(self.design_origin.0 + col, self.design_origin.1 + row)
    }

    /// Full permittivity for a projected design in `[0, 1]`.
    pub fn permittivity(&self, projected: &[f64]) -> Vec<f64> {
        let mut eps = self.background();
        for row in 0..self.nely {
            for col in 0..self.nelx {
                let y = projected[row * self.nelx + col];
                eps[self.design_cell(row, col)] = self.eps_lo + y * (self.eps_hi - self.eps_lo);
            }
        }
        eps
    }

    /// Unit line current across the input waveguide.
    pub fn source(&self) -> Vec<Complex64> {
        let mut b = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        let lo = self.input_center() - self.waveguide_width / 2;
        for iy in lo..lo + self.waveguide_width {
            b[self.grid.index(self.input.ix, iy)] = Complex64::new(1.0, 0.0);
        }
        b
    }
}
