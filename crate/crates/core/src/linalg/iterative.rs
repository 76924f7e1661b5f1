use alloc::vec;
use alloc::vec::Vec;

use super::{norm2, CsrMatrix, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct IterativeOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeReport {
    pub iterations: usize,
    /// Final `‖b − A x‖ / ‖b‖`.
    pub residual: f64,
    pub converged: bool,
}

/// Jacobi-preconditioned conjugate gradients for SPD systems.
pub fn pcg(a: &CsrMatrix<f64>, b: &[f64], opts: &IterativeOptions) -> (Vec<f64>, IterativeReport) {
    let n = b.len();
    let bnorm = norm2(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, IterativeReport { iterations: 0, residual: 0.0, converged: true });
    }
    let inv_diag: Vec<f64> =
        a.diagonal().iter().map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let mut res = 1.0;
    for it in 0..opts.max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return (x, IterativeReport { iterations: it, residual: res, converged: false });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res = norm2(&r) / bnorm;
        if res <= opts.rel_tol {
            return (x, IterativeReport { iterations: it + 1, residual: res, converged: true });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (x, IterativeReport { iterations: opts.max_iter, residual: res, converged: false })
}

fn dotu<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s += x.conj() * *y;
    }
    s
}

/// Jacobi-preconditioned BiCGSTAB for general (complex) systems.
pub fn bicgstab<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    opts: &IterativeOptions,
) -> (Vec<T>, IterativeReport) {
    let n = b.len();
    let bnorm = norm2(b);
    let mut x = vec![T::zero(); n];
    if bnorm == 0.0 {
        return (x, IterativeReport { iterations: 0, residual: 0.0, converged: true });
    }
    let inv_diag: Vec<T> = a
        .diagonal()
        .iter()
        .map(|&d| if d != T::zero() { T::one() / d } else { T::one() })
        .collect();
    let mut r = b.to_vec();
    let r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut t = vec![T::zero(); n];
    let mut res = 1.0;
    for it in 0..opts.max_iter {
        let rho_new = dotu(&r0, &r);
        if rho_new.modulus() == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = inv_diag[i] * p[i];
        }
        a.mul_vec_into(&y, &mut v);
        alpha = rho / dotu(&r0, &v);
        let mut s = r.clone();
        for i in 0..n {
            s[i] -= alpha * v[i];
            z[i] = inv_diag[i] * s[i];
        }
        a.mul_vec_into(&z, &mut t);
        let tt = dotu(&t, &t);
        omega = if tt.modulus() == 0.0 { T::zero() } else { dotu(&t, &s) / tt };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm2(&r) / bnorm;
        if res <= opts.rel_tol {
            return (x, IterativeReport { iterations: it + 1, residual: res, converged: true });
        }
        if omega.modulus() == 0.0 {
            break;
        }
    }
    (x, IterativeReport { iterations: opts.max_iter, residual: res, converged: false })
}

#[cfg(test)]
mod tests {
    use super::super::TripletBuilder;
    use super::*;
    use num_complex::Complex64;

    fn laplacian(n: usize, shift: f64) -> CsrMatrix<f64> {
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.push(i, i, 2.0 + shift);
            if i > 0 {
                b.push(i, i - 1, -1.0);
            }
            if i + 1 < n {
                b.push(i, i + 1, -1.0);
            }
        }
        b.build()
    }

    #[test]
    fn pcg_converges() {
        let a = laplacian(50, 0.01);
        let b = vec![1.0; 50];
        let (x, rep) = pcg(&a, &b, &IterativeOptions::default());
        assert!(rep.converged);
        let r = a.mul_vec(&x);
        assert!(r.iter().zip(&b).all(|(r, b)| (r - b).abs() < 1e-8));
    }

    #[test]
    fn bicgstab_complex_converges() {
        let n = 40;
        let mut tb = TripletBuilder::new(n, n);
        for i in 0..n {
            tb.push(i, i, Complex64::new(4.0, 0.5));
            if i > 0 {
                tb.push(i, i - 1, Complex64::new(-1.0, 0.0));
            }
            if i + 1 < n {
                tb.push(i, i + 1, Complex64::new(-1.0, 0.2));
            }
        }
        let a = tb.build();
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0, i as f64 * 0.1)).collect();
        let (x, rep) = bicgstab(&a, &b, &IterativeOptions::default());
        assert!(rep.converged, "{rep:?}");
        let r = a.mul_vec(&x);
        assert!(r.iter().zip(&b).all(|(r, b)| (r - b).norm() < 1e-8));
    }
}
