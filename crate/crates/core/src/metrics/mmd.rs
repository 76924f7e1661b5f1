use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kernel::{gaussian_kernel, KernelParams, SampleSet};
use crate::math::ExactSum;
use crate::{Error, Result};

/// Gram matrix of the pooled samples `a ++ b`.
fn pooled_gram(a: &SampleSet, b: &SampleSet, sigma: f64) -> Vec<Vec<f64>> {
    let pooled: Vec<&[f64]> = a.samples().iter().chain(b.samples()).map(Vec::as_slice).collect();
    let n = pooled.len();
    let mut g = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        g[i][i] = 1.0;
        for j in i + 1..n {
            let k = gaussian_kernel(pooled[i], pooled[j], sigma);
            g[i][j] = k;
            g[j][i] = k;
        }
    }
    g
}

/// MMD² between the index groups `x` and `y` of a pooled Gram matrix.
/// Exact summation makes the value independent of index order, hence
/// symmetric in the two groups.
fn statistic(g: &[Vec<f64>], x: &[usize], y: &[usize], unbiased: bool) -> f64 {
    let within = |s: &[usize]| {
        let mut acc = ExactSum::new();
        for (p, &i) in s.iter().enumerate() {
            for &j in &s[p + 1..] {
                acc.add(2.0 * g[i][j]);
            }
        }
        let m = s.len() as f64;
        if unbiased {
            acc.value() / (m * (m - 1.0))
        } else {
            acc.add(m);
            acc.value() / (m * m)
        }
    };
    let mut cross = ExactSum::new();
    for &i in x {
        for &j in y {
            cross.add(g[i][j]);
        }
    }
    let kxy = cross.value() / (x.len() as f64 * y.len() as f64);
    within(x) + within(y) - 2.0 * kxy
}

fn check_pair(d: &SampleSet, dg: &SampleSet, unbiased: bool) -> Result<()> {
    if d.dim() != dg.dim() {
        return Err(Error::invalid(alloc::format!("sample dimensions differ: {} vs {}", d.dim(), dg.dim())));
    }
    if unbiased && (d.len() < 2 || dg.len() < 2) {
        return Err(Error::invalid("unbiased MMD² needs at least two samples per set"));
    }
    Ok(())
}

/// Squared maximum mean discrepancy with a Gaussian kernel. The biased form
/// averages the full Gram blocks; the unbiased form drops the within-set
/// diagonals.
pub fn mmd2(d: &SampleSet, dg: &SampleSet, kp: &KernelParams, unbiased: bool) -> Result<f64> {
    check_pair(d, dg, unbiased)?;
    let sigma = kp.sigma(&[d, dg])?;
    let g = pooled_gram(d, dg, sigma);
    let x: Vec<usize> = (0..d.len()).collect();
    let y: Vec<usize> = (d.len()..d.len() + dg.len()).collect();
    Ok(statistic(&g, &x, &y, unbiased))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationTest {
    /// Unbiased MMD² of the observed split.
    pub statistic: f64,
    /// `(1 + #{permuted ≥ observed}) / (1 + n_perms)`.
    pub p_value: f64,
    pub sigma: f64,
}

/// Two-sample test of equal distributions: the pooled samples are randomly
/// re-split `n_perms` times, keeping the group sizes.
pub fn mmd2_permutation_test(
    d: &SampleSet,
    dg: &SampleSet,
    kp: &KernelParams,
    n_perms: usize,
    seed: u64,
) -> Result<PermutationTest> {
    check_pair(d, dg, true)?;
    if n_perms == 0 {
        return Err(Error::invalid("need at least one permutation"));
    }
    let sigma = kp.sigma(&[d, dg])?;
    let g = pooled_gram(d, dg, sigma);
    let m = d.len();
    let mut idx: Vec<usize> = (0..m + dg.len()).collect();
    let observed = statistic(&g, &idx[..m], &idx[m..], true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exceed = 0usize;
    for _ in 0..n_perms {
        idx.shuffle(&mut rng);
        if statistic(&g, &idx[..m], &idx[m..], true) >= observed {
            exceed += 1;
        }
    }
    Ok(PermutationTest { statistic: observed, p_value: (1 + exceed) as f64 / (1 + n_perms) as f64, sigma })
}
