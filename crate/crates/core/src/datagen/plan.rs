use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Values one dimension may take.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// An explicit list of values.
    Levels(Vec<f64>),
    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    Linspace { lo: f64, hi: f64, n: usize },
    /// A continuous interval. With `endpoints == false`, sampled values
    /// never equal `lo` or `hi`.
    Range { lo: f64, hi: f64, endpoints: bool },
}

impl Axis {
    /// Discrete values for Grid plans (and Corners for non-ranges).
    fn levels(&self) -> Option<Vec<f64>> {
        match self {
            Axis::Levels(v) => Some(v.clone()),
            Axis::Linspace { lo, hi, n } => Some(match n {
                0 => Vec::new(),
                1 => vec![*lo],
                _ => (0..*n).map(|i| if i + 1 == *n { *hi } else { lo + (hi - lo) * i as f64 / (*n - 1) as f64 }).collect(),
            }),
            Axis::Range { .. } => None,
        }
    }

    /// Continuous extent, for Random and LHS.
    fn extent(&self) -> Option<(f64, f64, bool)> {
        match *self {
            Axis::Range { lo, hi, endpoints } => Some((lo, hi, endpoints)),
            Axis::Linspace { lo, hi, .. } => Some((lo, hi, true)),
            Axis::Levels(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dimension {
    pub name: String,
    pub axis: Axis,
}

impl Dimension {
    pub fn new(name: &str, axis: Axis) -> Self {
        Self { name: name.to_string(), axis }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    /// Cartesian product of every dimension's levels.
    Grid,
    /// `count` independent uniform draws.
    Random,
    /// `count` stratified draws; each dimension is cut into `strata`
    /// intervals (default `count`) that are filled as evenly as possible.
    Lhs,
    /// Ranges contribute their two endpoints, discrete axes all levels.
    Corners,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    pub kind: PlanKind,
    pub dims: Vec<Dimension>,
    pub count: usize,
    pub strata: Option<usize>,
    pub seed: u64,
}

/// Cartesian product, first axis slowest.
fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for levels in axes {
        let mut next = Vec::with_capacity(out.len() * levels.len());
        for prefix in &out {
            for &v in levels {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Uniform draw in `[lo, hi)`, or in `(lo, hi)` when endpoints are excluded.
fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64, endpoints: bool) -> f64 {
    if hi <= lo {
        return lo;
    }
    loop {
        let v = lo + (hi - lo) * rng.gen::<f64>();
        if endpoints || (v > lo && v < hi) {
            return v.min(hi);
        }
    }
}

impl SamplingPlan {
    pub fn new(kind: PlanKind, dims: Vec<Dimension>) -> Self {
        Self { kind, dims, count: 0, strata: None, seed: 0 }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_strata(mut self, strata: usize) -> Self {
        self.strata = Some(strata);
        self
    }

    pub fn names(&self) -> Vec<&str> {
        self.dims.iter().map(|d| d.name.as_str()).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::invalid("sampling plan has no dimensions"));
        }
        for d in &self.dims {
            let bad = match &d.axis {
                Axis::Levels(v) => v.is_empty() || v.iter().any(|x| !x.is_finite()),
                Axis::Linspace { lo, hi, n } => *n == 0 || !(lo.is_finite() && hi.is_finite()),
                Axis::Range { lo, hi, .. } => !(lo.is_finite() && hi.is_finite() && lo <= hi),
            };
            if bad {
                return Err(Error::invalid(format!("dimension `{}` has no valid values", d.name)));
            }
        }
        Ok(())
    }

    /// Points in plan order, one value per dimension.
    pub fn sample(&self) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            PlanKind::Grid => {
                let axes = self
                    .dims
                    .iter()
                    .map(|d| {
                        d.axis.levels().ok_or_else(|| {
                            Error::invalid(format!("grid plans need discrete levels; `{}` is a range", d.name))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(cartesian(&axes))
            }
            PlanKind::Corners => {
                let axes: Vec<Vec<f64>> = self
                    .dims
                    .iter()
                    .map(|d| match d.axis {
                        Axis::Range { lo, hi, .. } if lo == hi => vec![lo],
                        Axis::Range { lo, hi, .. } => vec![lo, hi],
                        _ => d.axis.levels().expect("discrete axis"),
                    })
                    .collect();
                Ok(cartesian(&axes))
            }
            PlanKind::Random => Ok((0..self.count)
                .map(|_| {
                    self.dims
                        .iter()
                        .map(|d| match (&d.axis, d.axis.extent()) {
                            (Axis::Levels(v), _) => v[rng.gen_range(0..v.len())],
                            (_, Some((lo, hi, ep))) => draw(&mut rng, lo, hi, ep),
                            _ => unreachable!("every axis is discrete or continuous"),
                        })
                        .collect()
                })
                .collect()),
            PlanKind::Lhs => {
                let n = self.count;
                let k = self.strata.unwrap_or(n);
                if n > 0 && k == 0 {
                    return Err(Error::invalid("LHS needs at least one stratum"));
                }
                let mut points = vec![Vec::with_capacity(self.dims.len()); n];
                for d in &self.dims {
                    // stratum of sample i is floor(i·k/n), then shuffled
                    let mut strata: Vec<usize> = (0..n).map(|i| i * k / n).collect();
                    strata.shuffle(&mut rng);
                    for (p, &s) in points.iter_mut().zip(&strata) {
                        let v = match (&d.axis, d.axis.extent()) {
                            (Axis::Levels(v), _) => v[s * v.len() / k],
                            (_, Some((lo, hi, ep))) => {
                                let w = (hi - lo) / k as f64;
                                let (a, b) = (lo + w * s as f64, if s + 1 == k { hi } else { lo + w * (s + 1) as f64 });
                                draw(&mut rng, a, b, ep)
                            }
                            _ => unreachable!("every axis is discrete or continuous"),
                        };
                        p.push(v);
                    }
                }
                Ok(points)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_both_ends() {
        let l = Axis::Linspace { lo: 0.3, hi: 0.6, n: 4 }.levels().unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l[0], 0.3);
        assert_eq!(l[3], 0.6);
    }

    #[test]
    fn grid_rejects_ranges() {
        let p = SamplingPlan::new(PlanKind::Grid, vec![Dimension::new("a", Axis::Range { lo: 0.0, hi: 1.0, endpoints: true })]);
        assert!(p.sample().is_err());
    }
}
