//! Dataset-level metrics over records.

use std::collections::BTreeMap;
use std::str::FromStr;

use designbench_core::math::{mean, std_dev};
use designbench_core::metrics::{cog, dpp_diversity, mmd2, KernelParams, SampleSet};
use designbench_core::problem::{Category, Direction, Problem};
use serde::{Deserialize, Serialize};

use crate::record::Record;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    /// Biased MMD² between generated and reference designs.
    Mmd2,
    /// DPP diversity (Gram determinant) of the generated designs.
    Dpp,
    /// Share of records with a Theory constraint finding.
    Rvc,
    /// Share of failed records.
    Rf,
    /// Cumulative optimality gap of recorded histories.
    Cog,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Mmd2, Metric::Dpp, Metric::Rvc, Metric::Rf, Metric::Cog];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Mmd2 => "mmd2",
            Metric::Dpp => "dpp",
            Metric::Rvc => "rvc",
            Metric::Rf => "rf",
            Metric::Cog => "cog",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown metric `{s}` (expected mmd2, dpp, rvc, rf or cog)"))
    }
}

/// Summary of per-sample metric values. Set-level metrics have `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        Self { mean: mean(values), std: std_dev(values), n: values.len() }
    }

    fn single(v: f64) -> Self {
        Self { mean: v, std: 0.0, n: 1 }
    }
}

fn designs(records: &[Record]) -> Result<SampleSet> {
    let rows: Vec<Vec<f64>> = records.iter().filter(|r| !r.is_failure()).map(|r| r.design.clone()).collect();
    if rows.is_empty() {
        return Err(Error::usage("no successful records"));
    }
    Ok(SampleSet::new(rows)?)
}

/// Computes `metrics` for `generated` against `reference`. `problem` is
/// needed for `rvc` and `cog` (constraint rows and objective direction).
pub fn evaluate(
    generated: &[Record],
    reference: &[Record],
    metrics: &[Metric],
    problem: Option<&dyn Problem>,
) -> Result<BTreeMap<String, Summary>> {
    if generated.is_empty() {
        return Err(Error::usage("no records to evaluate"));
    }
    let need_problem = || problem.ok_or_else(|| Error::usage("this metric needs the problem definition"));
    let kp = KernelParams::default();
    let mut out = BTreeMap::new();
    for &m in metrics {
        let summary = match m {
            Metric::Mmd2 => Summary::single(mmd2(&designs(reference)?, &designs(generated)?, &kp, false)?),
            Metric::Dpp => Summary::single(dpp_diversity(&designs(generated)?, &kp)?.det),
            Metric::Rvc => {
                let p = need_problem()?;
                let flags = generated
                    .iter()
                    .map(|r| {
                        let found = p.check_constraints(Some(&r.design_for(p)?), &r.conditions())?;
                        Ok(if found.iter().any(|v| v.category == Category::Theory) { 1.0 } else { 0.0 })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Summary::of(&flags)
            }
            Metric::Rf => {
                let flags: Vec<f64> = generated.iter().map(|r| if r.is_failure() { 1.0 } else { 0.0 }).collect();
                Summary::of(&flags)
            }
            Metric::Cog => {
                let p = need_problem()?;
                let direction = p.spec().objectives[0].direction;
                let name = &p.spec().objectives[0].name;
                let gaps = generated
                    .iter()
                    .filter_map(|r| r.history.as_ref().map(|h| (r, h)))
                    .map(|(r, h)| {
                        let f_star = best_known(reference, r, name, direction).or_else(|| r.objectives.as_ref()?.get(name).copied());
                        let f_star = f_star.ok_or_else(|| Error::usage("history without a final objective"))?;
                        let traj: Vec<f64> = h.iter().map(|v| v[0]).collect();
                        Ok(cog(&traj, f_star, direction)?)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if gaps.is_empty() {
                    return Err(Error::usage("cog needs records with optimization histories"));
                }
                Summary::of(&gaps)
            }
        };
        out.insert(m.as_str().to_string(), summary);
    }
    Ok(out)
}

/// Best reference objective among records sharing `r`'s conditions.
fn best_known(reference: &[Record], r: &Record, name: &str, direction: Direction) -> Option<f64> {
    reference
        .iter()
        .filter(|q| q.conditions == r.conditions)
        .filter_map(|q| q.objectives.as_ref()?.get(name).copied())
        .reduce(|a, b| match direction {
            Direction::Minimize => a.min(b),
            Direction::Maximize => a.max(b),
        })
}
