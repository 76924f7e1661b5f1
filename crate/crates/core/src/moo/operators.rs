//! Bounded simulated binary crossover and polynomial mutation.

use rand::Rng;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

/// SBX on one variable pair with distribution index `eta`.
fn sbx_pair<R: Rng + ?Sized>(x1: f64, x2: f64, lo: f64, hi: f64, eta: f64, rng: &mut R) -> (f64, f64) {
    if (x1 - x2).abs() <= 1e-14 || hi <= lo {
        return (x1, x2);
    }
    let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let u: f64 = rng.gen();
    let spread = |beta: f64| {
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        if u <= 1.0 / alpha {
            (u * alpha).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
        }
    };
    let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
    let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
    let c1 = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
    let c2 = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
    if rng.gen::<bool>() {
        (c2, c1)
    } else {
        (c1, c2)
    }
}

/// Crosses two parents in place with probability `p`; each variable is
/// recombined with probability 1/2.
pub fn sbx_crossover<R: Rng + ?Sized>(
    a: &mut [f64],
    b: &mut [f64],
    lower: &[f64],
    upper: &[f64],
    eta: f64,
    p: f64,
    rng: &mut R,
) {
    if rng.gen::<f64>() >= p {
        return;
    }
    for i in 0..a.len() {
        if rng.gen::<bool>() {
            let (c1, c2) = sbx_pair(a[i], b[i], lower[i], upper[i], eta, rng);
            a[i] = c1;
            b[i] = c2;
        }
    }
}

/// Mutates each variable with probability `p`.
pub fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], lower: &[f64], upper: &[f64], eta: f64, p: f64, rng: &mut R) {
    for i in 0..x.len() {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let (lo, hi) = (lower[i], upper[i]);
        if hi <= lo {
            continue;
        }
        let y = x[i];
        let span = hi - lo;
        let u: f64 = rng.gen();
        let pow = 1.0 / (eta + 1.0);
        let dq = if u < 0.5 {
            let xy = 1.0 - (y - lo) / span;
            (2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0)).powf(pow) - 1.0
        } else {
            let xy = 1.0 - (hi - y) / span;
            1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0)).powf(pow)
        };
        x[i] = (y + dq * span).clamp(lo, hi);
    }
}
