//! Finite-difference frequency-domain solver for the scalar out-of-plane
//! field: `(∇² + ω² ε) e = i ω b` with `c = 1`, a five-point stencil and
//! stretched-coordinate PML on all four edges.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use crate::linalg::{bicgstab, norm2, BandedLu, CsrMatrix, IterativeOptions, TripletBuilder};
use crate::{Error, Result};

type C64 = Complex64;

/// Grading exponent and log reflection target of the PML conductivity.
const PML_ORDER: f64 = 3.0;
const PML_LN_R: f64 = -30.0;
/// Largest grid handled by the direct banded factorization.
const DIRECT_LIMIT: usize = 300 * 300;
const RESIDUAL_TOL: f64 = 1e-8;

/// Rectangular simulation grid of `nx × ny` cells with spacing `dl`.
/// Cells are indexed `ix * ny + iy`. Edges without PML hold the field at
/// zero (a perfect electric conductor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fdfd {
    pub nx: usize,
    pub ny: usize,
    pub dl: f64,
    /// PML thickness in cells on the left/right edges.
    pub npml: usize,
    /// PML thickness in cells on the bottom/top edges.
    pub npml_y: usize,
}

impl Fdfd {
    pub fn new(nx: usize, ny: usize, dl: f64, npml: usize) -> Self {
        Self { nx, ny, dl, npml, npml_y: npml }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    /// Coordinate stretch `s = 1 − iσ/ω` at `pos` cells from the lower edge of
    /// an axis with `n` cells.
    fn stretch(&self, pos: f64, n: usize, npml: usize, omega: f64) -> C64 {
        if npml == 0 {
            return C64::new(1.0, 0.0);
        }
        let l = npml as f64;
        let depth = (l - pos).max(pos - (n as f64 - l)).max(0.0);
        let sigma_max = -(PML_ORDER + 1.0) * PML_LN_R / (2.0 * l * self.dl);
        let sigma = sigma_max * (depth / l).powf(PML_ORDER);
        C64::new(1.0, -sigma / omega)
    }

    /// Assembles `∇²_s + ω² diag(ε)`.
    pub fn operator(&self, eps: &[f64], omega: f64) -> CsrMatrix<C64> {
        assert_eq!(eps.len(), self.len(), "permittivity grid size");
        let (nx, ny) = (self.nx, self.ny);
        let inv = 1.0 / (self.dl * self.dl);
        let (px, py) = (self.npml, self.npml_y);
        let sx: Vec<C64> = (0..nx).map(|i| self.stretch(i as f64 + 0.5, nx, px, omega)).collect();
        let sxh: Vec<C64> = (0..=nx).map(|i| self.stretch(i as f64, nx, px, omega)).collect();
        let sy: Vec<C64> = (0..ny).map(|i| self.stretch(i as f64 + 0.5, ny, py, omega)).collect();
        let syh: Vec<C64> = (0..=ny).map(|i| self.stretch(i as f64, ny, py, omega)).collect();
        let mut b = TripletBuilder::with_capacity(self.len(), self.len(), 5 * self.len());
        for ix in 0..nx {
            for iy in 0..ny {
                let k = self.index(ix, iy);
                let cx = inv / sx[ix];
                let cy = inv / sy[iy];
                let (xl, xr) = (cx / sxh[ix], cx / sxh[ix + 1]);
                let (yl, yr) = (cy / syh[iy], cy / syh[iy + 1]);
                b.push(k, k, C64::new(omega * omega * eps[k], 0.0) - xl - xr - yl - yr);
                if ix > 0 {
                    b.push(k, self.index(ix - 1, iy), xl);
                }
                if ix + 1 < nx {
                    b.push(k, self.index(ix + 1, iy), xr);
                }
                if iy > 0 {
                    b.push(k, self.index(ix, iy - 1), yl);
                }
                if iy + 1 < ny {
                    b.push(k, self.index(ix, iy + 1), yr);
                }
            }
        }
        b.build()
    }

    /// Factors the operator for repeated forward and adjoint solves.
    pub fn factor(&self, eps: &[f64], omega: f64) -> Result<FdfdSystem> {
        if !(omega > 0.0) {
            return Err(Error::invalid("angular frequency must be positive"));
        }
        let a = self.operator(eps, omega);
        let lu = if self.len() <= DIRECT_LIMIT { Some(BandedLu::factor(&a)?) } else { None };
        Ok(FdfdSystem { a, lu, omega })
    }

    /// Field excited by the current density `b`.
    pub fn solve(&self, eps: &[f64], omega: f64, b: &[C64]) -> Result<Vec<C64>> {
        self.factor(eps, omega)?.solve_source(b)
    }
}

/// A factored FDFD operator.
#[derive(Debug, Clone)]
pub struct FdfdSystem {
    a: CsrMatrix<C64>,
    lu: Option<BandedLu<C64>>,
    omega: f64,
}

impl FdfdSystem {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn matrix(&self) -> &CsrMatrix<C64> {
        &self.a
    }

    /// Solves `A e = i ω b`.
    pub fn solve_source(&self, b: &[C64]) -> Result<Vec<C64>> {
        let rhs: Vec<C64> = b.iter().map(|&v| C64::new(0.0, self.omega) * v).collect();
        self.solve(&rhs)
    }

    /// Solves `A x = rhs`.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        self.solve_checked(rhs, false)
    }

    /// Solves `Aᵀ x = rhs`.
    pub fn solve_transpose(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        self.solve_checked(rhs, true)
    }

    fn residual(&self, x: &[C64], rhs: &[C64], transpose: bool) -> Vec<C64> {
        let ax = if transpose { self.a.mul_transpose_vec(x) } else { self.a.mul_vec(x) };
        rhs.iter().zip(ax).map(|(b, v)| b - v).collect()
    }

    fn solve_checked(&self, rhs: &[C64], transpose: bool) -> Result<Vec<C64>> {
        let bnorm = norm2(rhs);
        if bnorm == 0.0 {
            return Ok(alloc::vec![C64::new(0.0, 0.0); rhs.len()]);
        }
        match &self.lu {
            Some(lu) => {
                let apply = |r: &[C64]| if transpose { lu.solve_transpose(r) } else { lu.solve(r) };
                let mut x = apply(rhs);
                // iterative refinement guards against pivot growth
                for _ in 0..3 {
                    let r = self.residual(&x, rhs, transpose);
                    let rel = norm2(&r) / bnorm;
                    if rel <= RESIDUAL_TOL {
                        return Ok(x);
                    }
                    if !rel.is_finite() {
                        break;
                    }
                    for (xi, di) in x.iter_mut().zip(apply(&r)) {
                        *xi += di;
                    }
                }
                let rel = norm2(&self.residual(&x, rhs, transpose)) / bnorm;
                if rel <= RESIDUAL_TOL {
                    Ok(x)
                } else {
                    Err(Error::Singular(format!("FDFD solve left relative residual {rel:e}")))
                }
            }
            None => {
                let opts = IterativeOptions { rel_tol: RESIDUAL_TOL * 0.1, max_iter: 20_000 };
                let (x, report) =
                    if transpose { bicgstab(&self.a.transpose(), rhs, &opts) } else { bicgstab(&self.a, rhs, &opts) };
                if report.converged {
                    Ok(x)
                } else {
                    Err(Error::NotConverged { iterations: report.iterations, residual: report.residual })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn interior_stencil_without_pml() {
        let g = Fdfd::new(3, 3, 0.1, 0);
        let eps = vec![2.0; 9];
        let omega = 3.0;
        let a = g.operator(&eps, omega);
        let inv = 100.0;
        let center = g.index(1, 1);
        let row: Vec<(usize, C64)> = a.row(center).collect();
        assert_eq!(row.len(), 5);
        for (j, v) in row {
            let expected = if j == center { -4.0 * inv + omega * omega * 2.0 } else { inv };
            assert!((v - C64::new(expected, 0.0)).norm() < 1e-9, "column {j}");
            if j != center {
                assert!([g.index(0, 1), g.index(2, 1), g.index(1, 0), g.index(1, 2)].contains(&j));
            }
        }
        // a corner keeps the full diagonal (zero field beyond the grid)
        assert!((a.get(0, 0) - C64::new(-4.0 * inv + 18.0, 0.0)).norm() < 1e-9);
        assert_eq!(a.row(0).count(), 3);
    }

    #[test]
    fn zero_source_gives_zero_field() {
        let g = Fdfd::new(30, 30, 0.05, 10);
        let e = g.solve(&vec![1.0; 900], 4.0, &vec![C64::new(0.0, 0.0); 900]).unwrap();
        assert!(e.iter().all(|v| *v == C64::new(0.0, 0.0)));
    }
}
