//! Design files: `{"shape": [nely, nelx], "values": [...]}`, values
//! row-major. Dataset records (`"design"` instead of `"values"`) load too.

use std::path::Path;

use designbench_core::problem::{Design, DesignSpace};
use serde::{Deserialize, Serialize};

use crate::float::to_json;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    pub shape: Vec<usize>,
    #[serde(alias = "design")]
    pub values: Vec<f64>,
}

impl DesignFile {
    pub fn of(design: &Design) -> Self {
        Self { shape: design.shape(), values: design.values().to_vec() }
    }

    /// Checks the file against `space` and wraps it as a design.
    pub fn into_design(self, space: &DesignSpace) -> Result<Design> {
        if self.shape != space.shape {
            return Err(Error::usage(format!(
                "design shape {:?} does not match the problem's {:?}",
                self.shape, space.shape
            )));
        }
        Ok(Design::from_space(space, self.values)?)
    }
}

pub fn read_design(path: &Path) -> Result<DesignFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_design(path: &Path, design: &Design) -> Result<()> {
    let mut text = to_json(&DesignFile::of(design))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
