//! Dataset records, one JSON object per line.

use std::path::Path;

use designbench_core::datagen::Split;
use designbench_core::problem::{Conditions, Design, Problem};
use designbench_core::registry;
use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::float::to_json;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// Canonical problem identifier, e.g. `beams2d/v0`.
    pub problem: String,
    /// Position of the job in the sampling plan.
    pub index: usize,
    pub seed: u64,
    pub conditions: IndexMap<String, f64>,
    pub shape: Vec<usize>,
    /// Row-major design entries.
    pub design: Vec<f64>,
    /// `None` when the job failed.
    pub objectives: Option<IndexMap<String, f64>>,
    pub failure: Option<String>,
    #[serde(serialize_with = "split_ser", deserialize_with = "split_de")]
    pub split: Split,
    /// Objective values per optimizer iteration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<Vec<f64>>>,
}

fn split_ser<S: Serializer>(s: &Split, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(s.as_str())
}

fn split_de<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Split, D::Error> {
    let s = String::deserialize(de)?;
    Split::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown split `{s}`")))
}

impl Record {
    pub fn is_failure(&self) -> bool {
        self.objectives.is_none()
    }

    pub fn conditions(&self) -> Conditions {
        let mut c = Conditions::new();
        for (k, v) in &self.conditions {
            c.set(k, *v);
        }
        c
    }

    /// Design in the layout of `problem`.
    pub fn design_for(&self, problem: &dyn Problem) -> Result<Design> {
        crate::design::DesignFile { shape: self.shape.clone(), values: self.design.clone() }
            .into_design(&problem.spec().design_space)
    }

    /// A fresh instance of the record's problem at the record's grid size.
    pub fn problem(&self) -> Result<Box<dyn Problem>> {
        let size = match self.shape[..] {
            [nely, nelx] => Some((nelx, nely)),
            _ => None,
        };
        let p = registry::make(&self.problem)?;
        if size.is_some() && p.spec().design_space.shape != self.shape {
            return Ok(registry::make_sized(&self.problem, size)?);
        }
        Ok(p)
    }
}

pub fn write_records(records: &[Record]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&to_json(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_records(text: &str, path: &Path) -> Result<Vec<Record>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse { path: path.into(), line: i + 1, message: e.to_string() })
        })
        .collect()
}

pub fn read_records(path: &Path) -> Result<Vec<Record>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records(&text, path)
}
