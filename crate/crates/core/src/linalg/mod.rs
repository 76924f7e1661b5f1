//! Linear algebra used by the simulators: dense LU, banded direct solvers,
//! compressed sparse rows and Krylov iterations.

mod banded;
mod dense;
mod iterative;
mod sparse;

pub use banded::{BandedCholesky, BandedLu};
pub use dense::{determinant, DenseLu};
pub use iterative::{bicgstab, pcg, IterativeOptions, IterativeReport};
pub use sparse::{CsrMatrix, TripletBuilder};

use core::fmt::Debug;
use core::ops::Neg;

use num_complex::Complex64;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use num_traits::NumAssign;

use crate::{Error, Result};

/// Field element usable by the generic solvers (`f64` and `Complex64`).
pub trait Scalar:
    Copy + PartialEq + Debug + NumAssign + Neg<Output = Self> + Send + Sync + 'static
{
    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

pub fn norm2<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.modulus() * x.modulus()).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a symmetric positive definite sparse system.
///
/// Small and moderately sized systems go through a banded Cholesky
/// factorization; when the band would be too large the solve falls back to
/// Jacobi-preconditioned conjugate gradients at `rel_tol`.
pub fn solve_spd(a: &CsrMatrix<f64>, b: &[f64], rel_tol: f64) -> Result<alloc::vec::Vec<f64>> {
    const MAX_BAND_WORK: f64 = 4.0e9;
    let n = a.nrows();
    if n == 0 {
        return Ok(alloc::vec::Vec::new());
    }
    let bw = a.bandwidth();
    if (n as f64) * (bw as f64 + 1.0).powi(2) <= MAX_BAND_WORK {
        let chol = BandedCholesky::factor(a)?;
        Ok(chol.solve(b))
    } else {
        let opts = IterativeOptions { rel_tol, max_iter: 20 * n };
        let (x, report) = pcg(a, b, &opts);
        if report.converged {
            Ok(x)
        } else {
            Err(Error::NotConverged { iterations: report.iterations, residual: report.residual })
        }
    }
}
