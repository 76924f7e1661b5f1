//! The problem abstraction shared by every simulator: metadata, designs,
//! conditions, constraint checking and seeding.

mod constraints;

pub use constraints::{evaluate_rows, Category, ConstraintRow, Interval, Quantity, Severity, Violation};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    Continuous,
    Discrete,
    Mixed,
}

/// Box-shaped design space. Bounds are either one pair broadcast over the
/// whole shape or one pair per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub shape: Vec<usize>,
    pub kind: DesignKind,
}

impl DesignSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, shape: Vec<usize>, kind: DesignKind) -> Result<Self> {
        let len: usize = shape.iter().product();
        if lower.len() != upper.len() {
            return Err(Error::invalid("lower and upper bounds differ in length"));
        }
        if lower.len() != 1 && lower.len() != len {
            return Err(Error::invalid(format!(
                "bounds have {} entries but the shape holds {len}",
                lower.len()
            )));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
            return Err(Error::invalid(format!("lower[{i}] > upper[{i}]")));
        }
        Ok(Self { lower, upper, shape, kind })
    }

    /// Scalar-broadcast box.
    pub fn uniform(lo: f64, hi: f64, shape: Vec<usize>) -> Self {
        Self::new(vec![lo], vec![hi], shape, DesignKind::Continuous).expect("valid box")
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        if self.lower.len() == 1 {
            (self.lower[0], self.upper[0])
        } else {
            (self.lower[i], self.upper[i])
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x.iter().enumerate().all(|(i, &v)| {
                let (lo, hi) = self.bounds(i);
                v >= lo && v <= hi
            })
    }

    /// Projects `x` onto the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            let (lo, hi) = self.bounds(i);
            *v = v.clamp(lo, hi);
        }
    }

    /// Uniform sample inside the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (lo, hi) = self.bounds(i);
                if lo == hi {
                    lo
                } else {
                    lo + (hi - lo) * rng.gen::<f64>()
                }
            })
            .collect()
    }
}

impl fmt::Display for DesignSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape: Vec<String> = self.shape.iter().map(|s| s.to_string()).collect();
        let shape = if shape.len() == 1 { format!("({},)", shape[0]) } else { format!("({})", shape.join(", ")) };
        if self.lower.len() == 1 {
            write!(
                f,
                "Box({}, {}, {shape}, float64)",
                crate::math::py_float(self.lower[0]),
                crate::math::py_float(self.upper[0])
            )
        } else {
            write!(f, "Box(<per-entry bounds>, {shape}, float64)")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Multiplier that turns the objective into a minimization.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Minimize => 1.0,
            Direction::Maximize => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Minimize => "MINIMIZE",
            Direction::Maximize => "MAXIMIZE",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub name: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub name: String,
    pub default: f64,
}

/// Problem metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub version: u32,
    pub design_space: DesignSpace,
    pub objectives: Vec<ObjectiveSpec>,
    pub conditions: Vec<ConditionSpec>,
    pub dataset_path: Option<String>,
}

impl ProblemSpec {
    pub fn new(name: &str, version: u32, design_space: DesignSpace) -> Self {
        Self {
            name: name.into(),
            version,
            design_space,
            objectives: Vec::new(),
            conditions: Vec::new(),
            dataset_path: None,
        }
    }

    pub fn objective(mut self, name: &str, direction: Direction) -> Self {
        assert!(self.objectives.iter().all(|o| o.name != name), "duplicate objective {name}");
        self.objectives.push(ObjectiveSpec { name: name.into(), direction });
        self
    }

    pub fn condition(mut self, name: &str, default: f64) -> Self {
        assert!(self.conditions.iter().all(|c| c.name != name), "duplicate condition {name}");
        self.conditions.push(ConditionSpec { name: name.into(), default });
        self
    }

    /// `"<name>/v<version>"`
    pub fn id(&self) -> String {
        format!("{}/v{}", self.name, self.version)
    }

    pub fn default_conditions(&self) -> Conditions {
        Conditions(self.conditions.iter().map(|c| (c.name.clone(), c.default)).collect())
    }

    /// Merges user overrides into the defaults, in declaration order.
    pub fn resolve(&self, overrides: &Conditions) -> Result<Conditions> {
        let mut out = self.default_conditions();
        for (name, value) in overrides.iter() {
            match out.0.iter_mut().find(|(n, _)| n == name) {
                Some(slot) => slot.1 = value,
                None => return Err(Error::UnknownCondition(name.into())),
            }
        }
        Ok(out)
    }

    pub fn objective_names(&self) -> Vec<&str> {
        self.objectives.iter().map(|o| o.name.as_str()).collect()
    }
}

/// Ordered `name → value` assignment of conditions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Conditions(Vec<(String, f64)>);

impl Conditions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        let mut c = Self::new();
        for (k, v) in pairs {
            c.set(k, *v);
        }
        c
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Value of a condition that is known to exist after [`ProblemSpec::resolve`].
    pub fn value(&self, name: &str) -> f64 {
        self.get(name).unwrap_or_else(|| panic!("condition `{name}` not resolved"))
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.0.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name.into(), value)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|(_, v)| *v).collect()
    }
}

/// Dense 2-D field stored row-major (`index = row * nelx + col`).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nely: usize,
    pub nelx: usize,
    pub data: Vec<f64>,
}

impl Grid {
    pub fn new(nely: usize, nelx: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nely * nelx {
            return Err(Error::invalid(format!(
                "grid of {nely}x{nelx} needs {} values, got {}",
                nely * nelx,
                data.len()
            )));
        }
        Ok(Self { nely, nelx, data })
    }

    pub fn filled(nely: usize, nelx: usize, value: f64) -> Self {
        Self { nely, nelx, data: vec![value; nely * nelx] }
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.nelx + col]
    }

    /// Column-major element ordering used by the finite-element code.
    pub fn to_column_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.data.len());
        for col in 0..self.nelx {
            for row in 0..self.nely {
                out.push(self.at(row, col));
            }
        }
        out
    }

    pub fn from_column_major(nely: usize, nelx: usize, v: &[f64]) -> Self {
        let mut data = vec![0.0; nely * nelx];
        for col in 0..nelx {
            for row in 0..nely {
                data[row * nelx + col] = v[col * nely + row];
            }
        }
        Self { nely, nelx, data }
    }
}

/// A problem-specific decision variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Grid(Grid),
    Vector(Vec<f64>),
}

impl Design {
    /// Entries flattened row-major.
    pub fn values(&self) -> &[f64] {
        match self {
            Design::Grid(g) => &g.data,
            Design::Vector(v) => v,
        }
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        match self {
            Design::Grid(g) => &mut g.data,
            Design::Vector(v) => v,
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        match self {
            Design::Grid(g) => vec![g.nely, g.nelx],
            Design::Vector(v) => vec![v.len()],
        }
    }

    pub fn as_grid(&self) -> Option<&Grid> {
        match self {
            Design::Grid(g) => Some(g),
            Design::Vector(_) => None,
        }
    }

    /// Wraps flat values in the layout of `space`.
    pub fn from_space(space: &DesignSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::invalid(format!(
                "design has {} values, design space holds {}",
                values.len(),
                space.len()
            )));
        }
        match space.shape.as_slice() {
            [nely, nelx] => Ok(Design::Grid(Grid::new(*nely, *nelx, values)?)),
            _ => Ok(Design::Vector(values)),
        }
    }
}

/// Per-iteration record of an optimizer run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptHistory {
    pub objective_values: Vec<Vec<f64>>,
    pub designs: Option<Vec<Design>>,
    /// Continuation parameter per iteration (projection strength), when the
    /// optimizer uses one.
    pub continuation: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl OptHistory {
    pub fn push(&mut self, objectives: Vec<f64>) {
        self.objective_values.push(objectives);
        self.iterations = self.objective_values.len();
    }

    /// Trajectory of the first objective.
    pub fn first_objective(&self) -> Vec<f64> {
        self.objective_values.iter().map(|v| v[0]).collect()
    }
}

/// Seeded random state owned by a problem instance.
#[derive(Debug, Clone)]
pub struct SeedState {
    pub seed: u64,
    pub rng: ChaCha8Rng,
}

impl SeedState {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn reset(&mut self, seed: u64) {
        *self = Self::new(seed);
    }
}

impl Default for SeedState {
    fn default() -> Self {
        Self::new(0)
    }
}

/// Samples a design uniformly inside the problem's design space.
pub fn random_design(spec: &ProblemSpec, seed: u64) -> (Design, Conditions) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = spec.design_space.sample(&mut rng);
    (Design::from_space(&spec.design_space, values).expect("shape matches"), spec.default_conditions())
}

/// Uniform interface over every benchmark problem.
///
/// Implementors provide metadata, their constraint table and the raw
/// `evaluate` / `run_optimizer` routines; the provided methods add
/// condition resolution, design validation and strict-mode gating.
pub trait Problem: Send {
    fn spec(&self) -> &ProblemSpec;

    /// Configuration values fixed per instance (grid sizes) that constraint
    /// rows may refer to alongside conditions.
    fn parameters(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    fn constraint_rows(&self, conds: &Conditions) -> Vec<ConstraintRow>;

    /// Objective values for `design` under fully resolved conditions.
    fn evaluate(&mut self, design: &Design, conds: &Conditions) -> Result<Vec<f64>>;

    fn run_optimizer(&mut self, start: &Design, conds: &Conditions) -> Result<(Design, OptHistory)>;

    fn seed_state(&mut self) -> &mut SeedState;

    /// Named auxiliary fields for rendering (for example simulated field
    /// magnitudes). Empty by default.
    fn diagnostic_fields(&mut self, _design: &Design, _conds: &Conditions) -> Result<Vec<(String, Grid)>> {
        Ok(Vec::new())
    }

    fn as_any(&self) -> &dyn Any;

    /// All findings for the design/condition pair, in declaration order.
    /// Unknown condition names are an input error, not a finding.
    fn check_constraints(&self, design: Option<&Design>, conds: &Conditions) -> Result<Vec<Violation>> {
        let resolved = self.spec().resolve(conds)?;
        let rows = self.constraint_rows(&resolved);
        Ok(evaluate_rows(&rows, design, &resolved, &self.parameters()))
    }

    fn reset(&mut self, seed: u64) {
        self.seed_state().reset(seed);
    }

    /// Uniform design from the instance's random stream plus default conditions.
    fn random_design(&mut self) -> (Design, Conditions) {
        let space = self.spec().design_space.clone();
        let values = space.sample(&mut self.seed_state().rng);
        (Design::from_space(&space, values).expect("shape matches"), self.spec().default_conditions())
    }

    /// Names of the entries of a vector design, in order. Empty for grids.
    fn design_names(&self) -> Vec<String> {
        Vec::new()
    }

    /// Conventional optimizer starting point for `conds`. Defaults to the
    /// midpoint of the design box.
    fn initial_design(&self, conds: &Conditions) -> Design {
        let _ = conds;
        let space = &self.spec().design_space;
        let values = (0..space.len())
            .map(|i| {
                let (lo, hi) = space.bounds(i);
                lo + 0.5 * (hi - lo)
            })
            .collect();
        Design::from_space(space, values).expect("shape matches")
    }

    /// Checks the inputs, then simulates. With `strict`, Error-severity
    /// findings abort before any simulation work.
    fn simulate(&mut self, design: &Design, conds: &Conditions, strict: bool) -> Result<Vec<f64>> {
        let resolved = self.prepare(Some(design), conds, strict)?;
        self.evaluate(design, &resolved)
    }

    fn optimize(&mut self, start: &Design, conds: &Conditions, strict: bool) -> Result<(Design, OptHistory)> {
        let resolved = self.prepare(Some(start), conds, strict)?;
        self.run_optimizer(start, &resolved)
    }

    #[doc(hidden)]
    fn prepare(&mut self, design: Option<&Design>, conds: &Conditions, strict: bool) -> Result<Conditions> {
        let resolved = self.spec().resolve(conds)?;
        if let Some(d) = design {
            if d.shape() != self.spec().design_space.shape {
                return Err(Error::invalid(format!(
                    "design shape {:?} does not match design space {:?}",
                    d.shape(),
                    self.spec().design_space.shape
                )));
            }
        }
        if strict {
            let errors: Vec<Violation> = self
                .check_constraints(design, &resolved)?
                .into_iter()
                .filter(Violation::is_error)
                .collect();
            if !errors.is_empty() {
                return Err(Error::Constraint(errors));
            }
        }
        Ok(resolved)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_space_invariants() {
        assert!(DesignSpace::new(vec![0.0], vec![1.0], vec![2, 3], DesignKind::Continuous).is_ok());
        assert!(DesignSpace::new(vec![0.0; 6], vec![1.0; 6], vec![2, 3], DesignKind::Continuous).is_ok());
        assert!(DesignSpace::new(vec![0.0; 5], vec![1.0; 5], vec![2, 3], DesignKind::Continuous).is_err());
        assert!(DesignSpace::new(vec![2.0], vec![1.0], vec![3], DesignKind::Continuous).is_err());
        assert_eq!(DesignSpace::uniform(0.0, 1.0, vec![50, 100]).to_string(), "Box(0.0, 1.0, (50, 100), float64)");
    }

    #[test]
    fn resolve_rejects_unknown_names() {
        let spec = ProblemSpec::new("toy", 0, DesignSpace::uniform(0.0, 1.0, vec![2]))
            .condition("a", 1.0)
            .condition("b", 2.0);
        let r = spec.resolve(&Conditions::from_pairs(&[("b", 5.0)])).unwrap();
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![("a", 1.0), ("b", 5.0)]);
        assert!(matches!(
            spec.resolve(&Conditions::from_pairs(&[("c", 0.0)])),
            Err(Error::UnknownCondition(n)) if n == "c"
        ));
        assert_eq!(spec.id(), "toy/v0");
    }

    #[test]
    fn degenerate_box_gives_constant_design() {
        let spec = ProblemSpec::new(
            "toy",
            0,
            DesignSpace::new(vec![1.0, -2.0, 3.5], vec![1.0, -2.0, 3.5], vec![3], DesignKind::Continuous).unwrap(),
        );
        let (d, _) = random_design(&spec, 99);
        assert_eq!(d.values(), &[1.0, -2.0, 3.5]);
    }

    #[test]
    fn column_major_roundtrip() {
        let g = Grid::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let cm = g.to_column_major();
        assert_eq!(cm, vec![1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        assert_eq!(Grid::from_column_major(2, 3, &cm), g);
    }
}
