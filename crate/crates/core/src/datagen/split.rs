use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "train" => Some(Split::Train),
            "val" => Some(Split::Val),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitCounts {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl SplitCounts {
    pub fn of(tags: &[Split]) -> Self {
        let mut c = Self::default();
        for t in tags {
            match t {
                Split::Train => c.train += 1,
                Split::Val => c.val += 1,
                Split::Test => c.test += 1,
            }
        }
        c
    }
}

/// Shuffled ratio split: `round(r₀N)` train, `round(r₁N)` validation
/// (capped by what is left), the rest test.
pub fn split_shuffled(n: usize, ratios: [f64; 3], seed: u64) -> Result<Vec<Split>> {
    if ratios.iter().any(|r| !(*r >= 0.0)) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("split ratios must be non-negative and sum to 1"));
    }
    let train = ((ratios[0] * n as f64).round() as usize).min(n);
    let val = ((ratios[1] * n as f64).round() as usize).min(n - train);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut tags = vec![Split::Test; n];
    for (pos, &i) in order.iter().enumerate() {
        if pos < train {
            tags[i] = Split::Train;
        } else if pos < train + val {
            tags[i] = Split::Val;
        }
    }
    Ok(tags)
}

/// Condition holdout: for every condition, `per_condition` of its distinct
/// values are drawn at random; records using any drawn value never enter
/// Train and are split evenly (after shuffling) into Val and Test.
/// `conditions[i]` holds record `i`'s condition values.
pub fn split_holdout(conditions: &[Vec<f64>], per_condition: usize, seed: u64) -> Result<Vec<Split>> {
    let Some(first) = conditions.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    if conditions.iter().any(|c| c.len() != m) {
        return Err(Error::invalid("records disagree on the number of conditions"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held: Vec<Vec<f64>> = Vec::with_capacity(m);
    for k in 0..m {
        let mut values: Vec<f64> = conditions.iter().map(|c| c[k]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if per_condition >= values.len() {
            return Err(Error::invalid("holdout would remove every value of a condition"));
        }
        values.shuffle(&mut rng);
        values.truncate(per_condition);
        held.push(values);
    }
    let mut out: Vec<usize> = (0..conditions.len())
        .filter(|&i| conditions[i].iter().zip(&held).any(|(v, h)| h.contains(v)))
        .collect();
    let mut tags = vec![Split::Train; conditions.len()];
    out.shuffle(&mut rng);
    let val = out.len().div_ceil(2);
    for (pos, &i) in out.iter().enumerate() {
        tags[i] = if pos < val { Split::Val } else { Split::Test };
    }
    Ok(tags)
}
