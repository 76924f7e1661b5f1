use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::{CsrMatrix, Scalar};
use crate::{Error, Result};

/// Pivots this small relative to the original diagonal signal a numerically
/// singular matrix (for example an unconstrained rigid-body mode).
const PIVOT_FLOOR: f64 = 1e-14;

/// Cholesky factor of a symmetric positive definite band matrix.
///
/// Only the lower band is stored: row `i` keeps columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &CsrMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let bw = a.bandwidth();
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    l[i * w + (j + bw - i)] = v;
                }
            }
        }
        let diag = a.diagonal();
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = l[i * w + (j + bw - i)];
                let ri = i * w + bw - i;
                let rj = j * w + bw - j;
                for k in k0..j {
                    s -= l[ri + k] * l[rj + k];
                }
                if j == i {
                    if !(s > PIVOT_FLOOR * diag[i].abs()) || !s.is_finite() {
                        return Err(Error::Singular(format!(
                            "matrix is not positive definite at row {i} (pivot {s:e}); \
                             check that supports remove all rigid-body modes"
                        )));
                    }
                    l[i * w + bw] = s.sqrt();
                } else {
                    l[i * w + (j + bw - i)] = s / l[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + (k + bw - i)] * y[k];
            }
            y[i] = s / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let s = y[i] / self.l[i * w + bw];
            y[i] = s;
            for k in i.saturating_sub(bw)..i {
                y[k] -= self.l[i * w + (k + bw - i)] * s;
            }
        }
        y
    }
}

/// LU factorization with partial pivoting of a general band matrix, stored
/// column-major in the LAPACK `gbtrf` layout (fill-in allowed up to
/// `kl + ku` above the diagonal).
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> BandedLu<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) + j * self.ld
    }

    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        let (kl, ku) = a.bandwidths();
        let ld = 2 * kl + ku + 1;
        let mut lu = Self { n, kl, ku, ld, ab: vec![T::zero(); ld * n], piv: vec![0; n] };
        for i in 0..n {
            for (j, v) in a.row(i) {
                let idx = lu.at(i, j);
                lu.ab[idx] = v;
            }
        }
        // upper limit of the columns touched by row swaps so far
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = j;
            let mut best = lu.ab[lu.at(j, j)].modulus();
            for i in j + 1..=j + km {
                let m = lu.ab[lu.at(i, j)].modulus();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            lu.piv[j] = p;
            if best == 0.0 {
                return Err(Error::Singular(format!("zero pivot in column {j}")));
            }
            ju = ju.max((p + ku).min(n - 1));
            if p != j {
                for c in j..=ju {
                    let (a1, a2) = (lu.at(j, c), lu.at(p, c));
                    lu.ab.swap(a1, a2);
                }
            }
            let d = lu.ab[lu.at(j, j)];
            let base = lu.at(j + 1, j);
            for r in 0..km {
                let v = lu.ab[base + r] / d;
                lu.ab[base + r] = v;
            }
            for c in j + 1..=ju {
                let f = lu.ab[lu.at(j, c)];
                if f == T::zero() {
                    continue;
                }
                let cb = lu.at(j + 1, c);
                for r in 0..km {
                    let l = lu.ab[base + r];
                    lu.ab[cb + r] -= l * f;
                }
            }
        }
        Ok(lu)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x = b.to_vec();
        for j in 0..n {
            let p = self.piv[j];
            if p != j {
                x.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let xj = x[j];
            if xj != T::zero() {
                let base = self.at(j + 1, j);
                for r in 0..km {
                    x[j + 1 + r] -= self.ab[base + r] * xj;
                }
            }
        }
        let kv = self.kl + self.ku;
        for j in (0..n).rev() {
            let xj = x[j] / self.ab[self.at(j, j)];
            x[j] = xj;
            if xj != T::zero() {
                let i0 = j.saturating_sub(kv);
                for i in i0..j {
                    x[i] -= self.ab[self.at(i, j)] * xj;
                }
            }
        }
        x
    }

    /// Solves `Aᵀ x = b` (plain transpose, no conjugation).
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let kv = self.kl + self.ku;
        let mut x = b.to_vec();
        // Uᵀ z = b
        for j in 0..n {
            let i0 = j.saturating_sub(kv);
            let mut s = x[j];
            for i in i0..j {
                s -= self.ab[self.at(i, j)] * x[i];
            }
            x[j] = s / self.ab[self.at(j, j)];
        }
        // (P L)ᵀ
        for j in (0..n).rev() {
            let km = self.kl.min(n - 1 - j);
            let base = self.at(j + 1, j);
            let mut s = x[j];
            for r in 0..km {
                s -= self.ab[base + r] * x[j + 1 + r];
            }
            x[j] = s;
            let p = self.piv[j];
            if p != j {
                x.swap(j, p);
            }
        }
        x
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Largest-to-smallest pivot magnitude ratio, a cheap conditioning hint.
    pub fn pivot_ratio(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for j in 0..self.n {
            let m = self.ab[self.at(j, j)].modulus();
            lo = lo.min(m);
            hi = hi.max(m);
        }
        hi / lo
    }
}
