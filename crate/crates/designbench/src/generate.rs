//! Dataset generation: sample a plan, run one optimize or simulate job per
//! point on a local worker pool, and write canonically ordered records.
//!
//! Output bytes depend only on the [`GenerateConfig`]; the number of
//! workers never changes them. Each job gets its own seed derived from the
//! run seed and the job's plan index.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use designbench_core::datagen::{split_holdout, split_shuffled, Axis, Dimension, PlanKind, SamplingPlan, SplitCounts};
use designbench_core::problem::{Conditions, Design, Problem};
use designbench_core::registry;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::float::to_json;
use crate::record::{write_records, Record};
use crate::{Error, Result};

pub const FORMAT: &str = "designbench-dataset/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Run the problem's optimizer from its conventional starting design.
    Optimize,
    /// Simulate a seeded random design.
    Simulate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisConfig {
    Levels(Vec<f64>),
    Linspace { lo: f64, hi: f64, n: usize },
    Range { lo: f64, hi: f64, endpoints: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimConfig {
    pub name: String,
    pub axis: AxisConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKindConfig {
    Grid,
    Random,
    Lhs,
    Corners,
}

/// Sampling plan over condition names or, for vector designs, design entry
/// names. Conditions not named keep their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    pub kind: PlanKindConfig,
    pub dims: Vec<DimConfig>,
    /// Number of points for Random and LHS plans.
    #[serde(default)]
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitConfig {
    /// Shuffled train/val/test ratios.
    Shuffled([f64; 3]),
    /// Hold out this many values of every plan dimension from Train.
    Holdout(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub problem: String,
    /// Grid size `(nelx, nely)`; `None` uses the problem default.
    pub size: Option<(usize, usize)>,
    pub mode: Mode,
    pub seed: u64,
    /// Treat Error-severity constraint findings as job failures.
    pub strict: bool,
    pub plan: PlanConfig,
    pub split: SplitConfig,
    /// Keep per-iteration objective histories in the records.
    pub history: bool,
}

impl GenerateConfig {
    pub fn new(problem: &str, plan: PlanConfig) -> Self {
        Self {
            problem: problem.to_string(),
            size: None,
            mode: Mode::Optimize,
            seed: 0,
            strict: false,
            plan,
            split: SplitConfig::Shuffled([0.7, 0.2, 0.1]),
            history: true,
        }
    }

    pub fn sampling_plan(&self) -> SamplingPlan {
        let dims = self
            .plan
            .dims
            .iter()
            .map(|d| {
                let axis = match &d.axis {
                    AxisConfig::Levels(v) => Axis::Levels(v.clone()),
                    AxisConfig::Linspace { lo, hi, n } => Axis::Linspace { lo: *lo, hi: *hi, n: *n },
                    AxisConfig::Range { lo, hi, endpoints } => Axis::Range { lo: *lo, hi: *hi, endpoints: *endpoints },
                };
                Dimension::new(&d.name, axis)
            })
            .collect();
        let kind = match self.plan.kind {
            PlanKindConfig::Grid => PlanKind::Grid,
            PlanKindConfig::Random => PlanKind::Random,
            PlanKindConfig::Lhs => PlanKind::Lhs,
            PlanKindConfig::Corners => PlanKind::Corners,
        };
        let mut plan = SamplingPlan::new(kind, dims).with_count(self.plan.count).with_seed(self.seed);
        if let Some(k) = self.plan.strata {
            plan = plan.with_strata(k);
        }
        plan
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub problem: String,
    pub version: u32,
    pub config: GenerateConfig,
    pub records: usize,
    pub failures: usize,
    pub splits: SplitSummary,
    /// Job seeds in file order.
    pub seeds: Vec<u64>,
    pub records_file: String,
    /// SHA-256 of the records file.
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Manifest {
    pub fn rf(&self) -> f64 {
        self.failures as f64 / self.records as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(to_json(self)?)
    }

    /// SHA-256 of the manifest's canonical JSON.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_json()?.as_bytes())))
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub records: Vec<Record>,
    pub manifest: Manifest,
    /// The records file contents.
    pub jsonl: String,
}

/// `<problem>-v<N>` file stem, e.g. `beams2d-v0`.
pub fn file_stem(problem_id: &str) -> String {
    problem_id.replace('/', "-")
}

/// Seed of job `index` in a run seeded with `seed`.
pub fn job_seed(seed: u64, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(b"designbench/job");
    h.update(seed.to_le_bytes());
    h.update((index as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

/// Generates with problems built from the registry.
pub fn generate(cfg: &GenerateConfig, parallelism: usize) -> Result<Dataset> {
    let id = registry::canonical_id(&cfg.problem)
        .ok_or_else(|| designbench_core::Error::UnknownProblem(cfg.problem.clone()))?;
    generate_with(cfg, parallelism, || registry::make_sized(id, cfg.size))
}

/// Generates with one problem instance per worker from `factory`.
pub fn generate_with<F>(cfg: &GenerateConfig, parallelism: usize, factory: F) -> Result<Dataset>
where
    F: Fn() -> designbench_core::Result<Box<dyn Problem>> + Sync,
{
    let probe = factory()?;
    let spec = probe.spec().clone();
    let design_names = probe.design_names();
    drop(probe);

    let targets: Vec<Target> = cfg
        .plan
        .dims
        .iter()
        .map(|d| {
            if spec.conditions.iter().any(|c| c.name == d.name) {
                Ok(Target::Condition(d.name.clone()))
            } else if let Some(i) = design_names.iter().position(|n| *n == d.name) {
                Ok(Target::Entry(i))
            } else {
                Err(Error::usage(format!("plan dimension `{}` is not a condition or design entry of {}", d.name, spec.id())))
            }
        })
        .collect::<Result<_>>()?;
    let points = cfg.sampling_plan().sample()?;
    if points.is_empty() {
        return Err(Error::usage("sampling plan is empty"));
    }

    let n = points.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Record>>> = Mutex::new(vec![None; n]);
    let worker_error: Mutex<Option<Error>> = Mutex::new(None);
    let workers = parallelism.clamp(1, n);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut problem = match factory() {
                    Ok(p) => p,
                    Err(e) => {
                        worker_error.lock().unwrap().get_or_insert(e.into());
                        return;
                    }
                };
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    let rec = run_job(problem.as_mut(), cfg, &targets, &points[i], i);
                    slots.lock().unwrap()[i] = Some(rec);
                }
            });
        }
    });
    if let Some(e) = worker_error.into_inner().unwrap() {
        return Err(e);
    }
    let mut slots = slots.into_inner().unwrap();

    // canonical order: plan point, then plan index
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .iter()
            .zip(&points[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut records: Vec<Record> = order.iter().map(|&i| slots[i].take().expect("every job ran")).collect();
    let sorted_points: Vec<Vec<f64>> = order.iter().map(|&i| points[i].clone()).collect();

    let tags = match &cfg.split {
        SplitConfig::Shuffled(ratios) => split_shuffled(n, *ratios, cfg.seed)?,
        SplitConfig::Holdout(k) => split_holdout(&sorted_points, *k, cfg.seed)?,
    };
    for (r, t) in records.iter_mut().zip(&tags) {
        r.split = *t;
    }
    let counts = SplitCounts::of(&tags);

    let jsonl = write_records(&records)?;
    let failures = records.iter().filter(|r| r.is_failure()).count();
    let manifest = Manifest {
        format: FORMAT.to_string(),
        problem: spec.id(),
        version: spec.version,
        config: cfg.clone(),
        records: n,
        failures,
        splits: SplitSummary { train: counts.train, val: counts.val, test: counts.test },
        seeds: records.iter().map(|r| r.seed).collect(),
        records_file: format!("{}.jsonl", file_stem(&spec.id())),
        sha256: hex::encode(Sha256::digest(jsonl.as_bytes())),
    };
    if failures == n {
        return Err(Error::AllFailed(Box::new(manifest)));
    }
    Ok(Dataset { records, manifest, jsonl })
}

enum Target {
    Condition(String),
    Entry(usize),
}

fn run_job(problem: &mut dyn Problem, cfg: &GenerateConfig, targets: &[Target], point: &[f64], index: usize) -> Record {
    let seed = job_seed(cfg.seed, index);
    problem.reset(seed);
    let spec = problem.spec().clone();
    let mut overrides = Conditions::new();
    for (t, &v) in targets.iter().zip(point) {
        if let Target::Condition(name) = t {
            overrides.set(name, v);
        }
    }
    let conds = spec.resolve(&overrides).expect("plan names were checked against the spec");
    let mut design = match cfg.mode {
        Mode::Optimize => problem.initial_design(&conds),
        Mode::Simulate => problem.random_design().0,
    };
    for (t, &v) in targets.iter().zip(point) {
        if let Target::Entry(i) = t {
            design.values_mut()[*i] = v;
        }
    }

    let outcome = match cfg.mode {
        Mode::Optimize => problem.optimize(&design, &conds, cfg.strict).and_then(|(d, h)| {
            let objectives = problem.simulate(&d, &conds, false)?;
            Ok((d, objectives, Some(h.objective_values)))
        }),
        Mode::Simulate => problem.simulate(&design, &conds, cfg.strict).map(|o| (design.clone(), o, None)),
    };
    let (design, objectives, failure, history) = match outcome {
        Ok((d, o, _)) if o.iter().any(|v| !v.is_finite()) => (d, None, Some("non-finite objective".to_string()), None),
        Ok((d, o, h)) => {
            let named: IndexMap<String, f64> =
                spec.objectives.iter().map(|s| s.name.clone()).zip(o).collect();
            (d, Some(named), None, if cfg.history { h } else { None })
        }
        Err(e) => (design, None, Some(e.to_string()), None),
    };
    Record {
        problem: spec.id(),
        index,
        seed,
        conditions: conds.iter().map(|(k, v)| (k.to_string(), v)).collect(),
        shape: Design::shape(&design),
        design: design.values().to_vec(),
        objectives,
        failure,
        split: designbench_core::datagen::Split::Train,
        history,
    }
}

/// Writes `<stem>.jsonl` and `<stem>.manifest.json` into `dir`.
pub fn write_dataset(dir: &Path, data: &Dataset) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let records = dir.join(&data.manifest.records_file);
    let manifest = dir.join(format!("{}.manifest.json", file_stem(&data.manifest.problem)));
    std::fs::write(&records, &data.jsonl).map_err(|e| Error::io(&records, e))?;
    let mut text = data.manifest.to_json()?;
    text.push('\n');
    std::fs::write(&manifest, text).map_err(|e| Error::io(&manifest, e))?;
    Ok((records, manifest))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
