use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::kernel::{gaussian_kernel, KernelParams, SampleSet};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dpp {
    /// `det K`, clamped at 0.
    pub det: f64,
    /// `ln det K`; `-inf` when the Gram matrix is singular.
    pub log_det: f64,
    pub sigma: f64,
}

/// Determinant of the Gaussian Gram matrix of `dg`, by an LDLᵀ
/// factorization (exact for 2×2: `1 − k²`).
pub fn dpp_diversity(dg: &SampleSet, kp: &KernelParams) -> Result<Dpp> {
    let sigma = kp.sigma(&[dg])?;
    let n = dg.len();
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(if i == j { 1.0 } else { gaussian_kernel(dg.get(i), dg.get(j), sigma) });
        }
    }
    // in-place LDLᵀ: strict lower part holds L, diagonal holds D
    let mut det = 1.0;
    let mut log_det = 0.0;
    for k in 0..n {
        let mut d = a[k * n + k];
        for p in 0..k {
            d -= a[k * n + p] * a[k * n + p] * a[p * n + p];
        }
        if !(d > 0.0) {
            return Ok(Dpp { det: 0.0, log_det: f64::NEG_INFINITY, sigma });
        }
        a[k * n + k] = d;
        det *= d;
        log_det += d.ln();
        for i in k + 1..n {
            let mut v = a[i * n + k];
            for p in 0..k {
                v -= a[i * n + p] * a[k * n + p] * a[p * n + p];
            }
            a[i * n + k] = v / d;
        }
    }
    Ok(Dpp { det: det.max(0.0), log_det, sigma })
}
