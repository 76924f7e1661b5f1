use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use crate::math::median;
use crate::{Error, Result};

/// Non-empty set of equal-length real vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    samples: Vec<Vec<f64>>,
}

impl SampleSet {
    pub fn new(samples: Vec<Vec<f64>>) -> Result<Self> {
        let dim = samples.first().map(Vec::len).ok_or_else(|| Error::invalid("sample set is empty"))?;
        if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.len() != dim) {
            return Err(Error::invalid(format!("sample {i} has dimension {}, expected {dim}", s.len())));
        }
        Ok(Self { dim, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.samples[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bandwidth {
    Fixed(f64),
    /// Median pairwise distance of the pooled samples; 1.0 if that is zero.
    #[default]
    MedianHeuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelParams {
    pub bandwidth: Bandwidth,
}

impl KernelParams {
    pub fn fixed(sigma: f64) -> Self {
        Self { bandwidth: Bandwidth::Fixed(sigma) }
    }

    /// Resolves σ over the pooled samples of `sets`.
    pub fn sigma(&self, sets: &[&SampleSet]) -> Result<f64> {
        match self.bandwidth {
            Bandwidth::Fixed(s) if s > 0.0 && s.is_finite() => Ok(s),
            Bandwidth::Fixed(s) => Err(Error::invalid(format!("kernel bandwidth must be positive, got {s}"))),
            Bandwidth::MedianHeuristic => {
                let pooled: Vec<&[f64]> = sets.iter().flat_map(|s| s.samples().iter().map(Vec::as_slice)).collect();
                let mut dists = Vec::with_capacity(pooled.len() * pooled.len().saturating_sub(1) / 2);
                for i in 0..pooled.len() {
                    for j in i + 1..pooled.len() {
                        dists.push(sq_dist(pooled[i], pooled[j]).sqrt());
                    }
                }
                Ok(match median(&dists) {
                    Some(m) if m > 0.0 => m,
                    _ => 1.0,
                })
            }
        }
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `exp(−‖a − b‖² / (2σ²))`
pub fn gaussian_kernel(a: &[f64], b: &[f64], sigma: f64) -> f64 {
    (-sq_dist(a, b) / (2.0 * sigma * sigma)).exp()
}
