//! Range and relation checks with categories and severities.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Conditions, Design};
use crate::math::py_float;

/// Where a constraint comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    /// Part of the mathematical problem definition.
    Theory,
    /// Arises from simulator assumptions or limitations.
    Implementation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Theory => "Theory",
            Category::Implementation => "Implementation",
        })
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    pub const fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: true, hi_open: true }
    }

    /// `[lo, ∞)`
    pub const fn at_least(lo: f64) -> Self {
        Self { lo, hi: f64::INFINITY, lo_open: false, hi_open: true }
    }

    /// `(lo, ∞)`
    pub const fn greater_than(lo: f64) -> Self {
        Self { lo, hi: f64::INFINITY, lo_open: true, hi_open: true }
    }

    /// `(lo, hi]`
    pub const fn left_open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: true, hi_open: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn render(&self, integer: bool) -> String {
        let num = |x: f64| {
            if integer && x.is_finite() {
                format!("{}", x as i64)
            } else {
                py_float(x)
            }
        };
        format!(
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            num(self.lo),
            num(self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// The quantity a constraint row inspects.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    /// A configuration value: a condition or an instance parameter.
    Config(String),
    /// Every entry of the design.
    DesignEntries,
    /// Mean of the design entries (volume fraction for density grids).
    DesignMean,
    /// One named entry of a vector design.
    DesignEntry { index: usize, name: String },
}

impl Quantity {
    pub fn config(name: &str) -> Self {
        Quantity::Config(name.to_string())
    }

    pub fn field_name(&self) -> String {
        match self {
            Quantity::Config(name) => format!("Config.{name}"),
            Quantity::DesignEntries => "Design".into(),
            Quantity::DesignMean => "Design.volume_fraction".into(),
            Quantity::DesignEntry { name, .. } => format!("Design.{name}"),
        }
    }
}

/// One declared constraint: `quantity ∈ interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub quantity: Quantity,
    pub interval: Interval,
    pub category: Category,
    pub severity: Severity,
    /// Render values and bounds as integers.
    pub integer: bool,
}

impl ConstraintRow {
    pub fn new(quantity: Quantity, interval: Interval, category: Category, severity: Severity) -> Self {
        Self { quantity, interval, category, severity, integer: false }
    }

    pub fn integer(mut self) -> Self {
        self.integer = true;
        self
    }

    pub fn theory_error(q: Quantity, i: Interval) -> Self {
        Self::new(q, i, Category::Theory, Severity::Error)
    }

    pub fn theory_warning(q: Quantity, i: Interval) -> Self {
        Self::new(q, i, Category::Theory, Severity::Warning)
    }

    pub fn impl_error(q: Quantity, i: Interval) -> Self {
        Self::new(q, i, Category::Implementation, Severity::Error)
    }

    pub fn impl_warning(q: Quantity, i: Interval) -> Self {
        Self::new(q, i, Category::Implementation, Severity::Warning)
    }

    /// Evaluates the row. Rows whose quantity is unavailable (no design
    /// given, unknown parameter) are skipped.
    pub fn check(
        &self,
        design: Option<&Design>,
        lookup: &dyn Fn(&str) -> Option<f64>,
    ) -> Option<Violation> {
        let value = match &self.quantity {
            Quantity::Config(name) => {
                let v = lookup(name)?;
                (!self.interval.contains(v)).then_some(v)
            }
            Quantity::DesignEntries => {
                let d = design?;
                d.values().iter().copied().find(|&v| !self.interval.contains(v))
            }
            Quantity::DesignMean => {
                let d = design?;
                let m = crate::math::mean(d.values());
                (!self.interval.contains(m)).then_some(m)
            }
            Quantity::DesignEntry { index, .. } => {
                let v = *design?.values().get(*index)?;
                (!self.interval.contains(v)).then_some(v)
            }
        }?;
        Some(Violation::new(self, value))
    }
}

/// One constraint-check finding.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub value: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub category: Category,
    pub severity: Severity,
    pub message: String,
}

impl Violation {
    fn new(row: &ConstraintRow, value: f64) -> Self {
        let field = row.quantity.field_name();
        let shown = if row.integer && value.is_finite() && value == value.trunc() {
            format!("{}", value as i64)
        } else {
            py_float(value)
        };
        let message = format!(
            "{field}: {shown} ∉ {} ({}, {})",
            row.interval.render(row.integer),
            row.category,
            row.severity
        );
        Self {
            field,
            value,
            bound_lo: row.interval.lo,
            bound_hi: row.interval.hi,
            category: row.category,
            severity: row.severity,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Runs every row in declaration order.
pub fn evaluate_rows(
    rows: &[ConstraintRow],
    design: Option<&Design>,
    conds: &Conditions,
    parameters: &[(String, f64)],
) -> Vec<Violation> {
    let lookup = |name: &str| {
        conds
            .get(name)
            .or_else(|| parameters.iter().find(|(n, _)| n == name).map(|(_, v)| *v))
    };
    rows.iter().filter_map(|r| r.check(design, &lookup)).collect()
}
