//! Optimality-criteria update with bisection on the volume multiplier.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use alloc::vec::Vec;

use super::DensityFilter;

/// Outcome of one OC update.
#[derive(Debug, Clone)]
pub struct OcStep {
    /// Updated design variables.
    pub x: Vec<f64>,
    /// Filtered (physical) densities of the update.
    pub x_phys: Vec<f64>,
    pub lambda: f64,
    pub bisections: usize,
    /// Largest absolute change of any design variable.
    pub change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OcSettings {
    pub move_limit: f64,
    pub lambda_max: f64,
    /// Accepted deviation of the filtered mean from the target volume.
    pub volume_tol: f64,
    pub max_bisections: usize,
}

impl Default for OcSettings {
    fn default() -> Self {
        Self { move_limit: 0.2, lambda_max: 1e9, volume_tol: 1e-9, max_bisections: 10_000 }
    }
}

/// Scales each variable by `sqrt(−dc / (λ dv))` within the move limit and the
/// box `[0, 1]`, bisecting `λ` until the filtered mean matches `volfrac`.
///
/// Positive compliance derivatives are clamped to zero. Bisection stops at the
/// volume tolerance or once the multiplier bracket collapses to machine
/// precision, so flat sensitivities cannot stall it.
pub fn oc_update(
    x: &[f64],
    dc: &[f64],
    dv: &[f64],
    volfrac: f64,
    filter: &DensityFilter,
    settings: &OcSettings,
) -> OcStep {
    let n = x.len();
    let (mut l1, mut l2) = (0.0f64, settings.lambda_max);
    let mut bisections = 0;
    let candidate = |lmid: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let ratio = (-dc[i]).max(0.0) / (lmid * dv[i]);
                let be = if ratio.is_finite() { ratio.sqrt() } else { f64::INFINITY };
                let lo = (x[i] - settings.move_limit).max(0.0);
                let hi = (x[i] + settings.move_limit).min(1.0);
                (x[i] * be).max(lo).min(hi)
            })
            .collect()
    };
    let mut lmid = 0.5 * (l1 + l2);
    let mut xnew = candidate(lmid);
    let mut x_phys = filter.apply(&xnew);
    loop {
        bisections += 1;
        let mean = x_phys.iter().sum::<f64>() / n as f64;
        if (mean - volfrac).abs() <= settings.volume_tol {
            break;
        }
        if mean > volfrac {
            l1 = lmid;
        } else {
            l2 = lmid;
        }
        let width = l2 - l1;
        let next = 0.5 * (l1 + l2);
        if width < f64::EPSILON
            || width <= f64::EPSILON * (l1 + l2)
            || next == l1
            || next == l2
            || bisections >= settings.max_bisections
        {
            break;
        }
        lmid = next;
        xnew = candidate(lmid);
        x_phys = filter.apply(&xnew);
    }
    let change = xnew.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    OcStep { x: xnew, x_phys, lambda: lmid, bisections, change }
}
