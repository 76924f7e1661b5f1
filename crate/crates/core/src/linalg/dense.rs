use alloc::format;
use alloc::vec::Vec;

use super::Scalar;
use crate::{Error, Result};

/// LU factorization with partial pivoting of a dense row-major matrix.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    piv: Vec<usize>,
    swaps: usize,
}

impl<T: Scalar> DenseLu<T> {
    /// Factors `a` (row-major, `n × n`). Exactly singular pivots are an error.
    pub fn factor(mut a: Vec<T>, n: usize) -> Result<Self> {
        let lu = Self::factor_unchecked(&mut a, n);
        if let Some(col) = lu.1 {
            return Err(Error::Singular(format!("zero pivot in column {col}")));
        }
        Ok(Self { n, lu: a, piv: lu.0, swaps: lu.2 })
    }

    fn factor_unchecked(a: &mut [T], n: usize) -> (Vec<usize>, Option<usize>, usize) {
        let mut piv: Vec<usize> = (0..n).collect();
        let mut singular = None;
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].modulus();
            for i in k + 1..n {
                let m = a[i * n + k].modulus();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 {
                singular.get_or_insert(k);
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
                swaps += 1;
            }
            let d = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / d;
                a[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = a[k * n + j];
                        a[i * n + j] -= f * u;
                    }
                }
            }
        }
        (piv, singular, swaps)
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    pub fn determinant(&self) -> T {
        let mut d = if self.swaps % 2 == 0 { T::one() } else { -T::one() };
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        d
    }
}

/// Determinant of a dense row-major matrix; zero when a pivot vanishes.
pub fn determinant(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let (_, singular, swaps) = DenseLu::<f64>::factor_unchecked(&mut m, n);
    if singular.is_some() {
        return 0.0;
    }
    let mut d = if swaps % 2 == 0 { 1.0 } else { -1.0 };
    for i in 0..n {
        d *= m[i * n + i];
    }
    d
}
