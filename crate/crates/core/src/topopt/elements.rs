//! Element matrices for unit square bilinear quads.
//!
//! Local node order is upper-left, upper-right, lower-right, lower-left, at
//! coordinates (0, 0), (1, 0), (1, 1), (0, 1) with y pointing down the grid.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

/// 8×8 plane-stress stiffness for unit Young's modulus, row-major.
pub fn element_stiffness(nu: f64) -> [f64; 64] {
    let k = [
        0.5 - nu / 6.0,
        0.125 + nu / 8.0,
        -0.25 - nu / 12.0,
        -0.125 + 3.0 * nu / 8.0,
        -0.25 + nu / 12.0,
        -0.125 - nu / 8.0,
        nu / 6.0,
        0.125 - 3.0 * nu / 8.0,
    ];
    const IDX: [[usize; 8]; 8] = [
        [0, 1, 2, 3, 4, 5, 6, 7],
        [1, 0, 7, 6, 5, 4, 3, 2],
        [2, 7, 0, 5, 6, 3, 4, 1],
        [3, 6, 5, 0, 7, 2, 1, 4],
        [4, 5, 6, 7, 0, 1, 2, 3],
        [5, 4, 3, 2, 1, 0, 7, 6],
        [6, 3, 4, 1, 2, 7, 0, 5],
        [7, 2, 1, 4, 3, 6, 5, 0],
    ];
    let scale = 1.0 / (1.0 - nu * nu);
    let mut ke = [0.0; 64];
    for i in 0..8 {
        for j in 0..8 {
            ke[i * 8 + j] = scale * k[IDX[i][j]];
        }
    }
    ke
}

/// 4×4 conduction matrix for unit conductivity, row-major. Independent of the
/// element size in two dimensions.
pub fn element_conduction() -> [f64; 16] {
    let (a, b, c) = (4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0);
    [a, b, c, b, b, a, b, c, c, b, a, b, b, c, b, a]
}

const NODE_XY: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

fn shape(a: usize, x: f64, y: f64) -> (f64, f64, f64) {
    let (xa, ya) = NODE_XY[a];
    let fx = if xa > 0.5 { x } else { 1.0 - x };
    let fy = if ya > 0.5 { y } else { 1.0 - y };
    let dx = if xa > 0.5 { 1.0 } else { -1.0 };
    let dy = if ya > 0.5 { 1.0 } else { -1.0 };
    (fx * fy, dx * fy, fx * dy)
}

/// 8×4 thermal-load coupling `∫ Bᵀ D ε₀ Nᵀ` for unit Young's modulus and unit
/// expansion coefficient, row-major. Nodal forces of an element at a nodal
/// temperature rise `ΔT` are `E α · Ce · ΔT`.
pub fn element_thermal_coupling(nu: f64) -> [f64; 32] {
    let g = 0.5 / 3f64.sqrt();
    let pts = [0.5 - g, 0.5 + g];
    let scale = 1.0 / (1.0 - nu);
    let mut ce = [0.0; 32];
    for &x in &pts {
        for &y in &pts {
            // each Gauss point carries weight 1/4 on the unit square
            for a in 0..4 {
                let (_, dnx, dny) = shape(a, x, y);
                for b in 0..4 {
                    let (nb, _, _) = shape(b, x, y);
                    ce[(2 * a) * 4 + b] += 0.25 * scale * dnx * nb;
                    ce[(2 * a + 1) * 4 + b] += 0.25 * scale * dny * nb;
                }
            }
        }
    }
    ce
}

/// Quadratic form `vᵀ M v` for a small row-major matrix.
pub(crate) fn quad_form<const N: usize>(m: &[f64], v: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let mut r = 0.0;
        for j in 0..N {
            r += m[i * N + j] * v[j];
        }
        s += v[i] * r;
    }
    s
}
