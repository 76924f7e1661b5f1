//! `designbench` command line.
//!
//! Machine output is JSON on stdout; messages go to stderr. Exit codes:
//! 0 ok, 1 I/O, 2 usage, 3 constraint error under `--strict`, 4 simulation
//! failure, 5 unknown problem.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use designbench::design::{read_design, write_design};
use designbench::evaluate::{evaluate, Metric};
use designbench::float::to_json;
use designbench::generate::{
    generate, read_manifest, write_dataset, AxisConfig, DimConfig, GenerateConfig, Mode, PlanConfig, PlanKindConfig,
    SplitConfig,
};
use designbench::record::read_records;
use designbench::render::{pgm, svg, svg_panels};
use designbench::{Error, Result};
use designbench_core::moo::{nsga2, Nsga2Settings, ProblemEvaluator};
use designbench_core::problem::{Conditions, Design, Problem, Violation};
use designbench_core::registry;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "designbench", version, about = "Engineering design benchmark problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List constraint findings; exits 3 when any is an error.
    Check {
        #[command(flatten)]
        common: Common,
        /// Design file to check along with the conditions.
        #[arg(long)]
        design: Option<PathBuf>,
    },
    /// Simulate a design (a seeded random one by default).
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        design: Option<PathBuf>,
    },
    /// Optimize from a design (the conventional start by default). Problems
    /// without their own optimizer, or `--nsga2`, run NSGA-II instead.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        design: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        nsga2: bool,
        #[arg(long, default_value_t = 20)]
        pop: usize,
        #[arg(long, default_value_t = 10)]
        generations: usize,
    },
    /// Generate a dataset over a sampling plan.
    Generate(GenerateArgs),
    /// Compute metrics of a dataset against a reference (itself by default).
    Evaluate {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Repeatable; defaults to mmd2, dpp, rvc and rf.
        #[arg(long = "metric")]
        metrics: Vec<Metric>,
    },
    /// Draw a design as PGM or SVG.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Pgm)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        /// SVG only: add simulated field panels where the problem has them.
        #[arg(long)]
        fields: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Condition override, repeatable.
    #[arg(long = "cond", value_name = "NAME=VAL", value_parser = parse_cond)]
    conds: Vec<(String, f64)>,
    /// Grid size.
    #[arg(long, value_name = "NELXxNELY", value_parser = parse_size)]
    size: Option<(usize, usize)>,
    /// Refuse to run when an Error-severity constraint is violated.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Rerun the configuration stored in a manifest; other plan flags are ignored.
    #[arg(long, conflicts_with_all = ["problem", "axes"])]
    from_manifest: Option<PathBuf>,
    #[arg(long, required_unless_present = "from_manifest")]
    problem: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "NELXxNELY", value_parser = parse_size)]
    size: Option<(usize, usize)>,
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = PlanArg::Grid)]
    plan: PlanArg,
    /// Plan dimension, repeatable: NAME=v1,v2,... (levels), NAME=lo:hi:n
    /// (evenly spaced) or NAME=lo..hi (range).
    #[arg(long = "axis", value_name = "NAME=SPEC", value_parser = parse_axis)]
    axes: Vec<DimConfig>,
    /// Points for random and lhs plans.
    #[arg(long, default_value_t = 0)]
    count: usize,
    #[arg(long)]
    strata: Option<usize>,
    /// Exclude range endpoints from random and lhs samples.
    #[arg(long)]
    open_ranges: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::Optimize)]
    mode: ModeArg,
    /// Train/val/test ratios.
    #[arg(long, default_value = "0.7,0.2,0.1", value_parser = parse_ratios)]
    split: [f64; 3],
    /// Hold out this many values of every plan dimension from train instead.
    #[arg(long)]
    holdout: Option<usize>,
    #[arg(long)]
    no_history: bool,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pgm,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanArg {
    Grid,
    Random,
    Lhs,
    Corners,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Optimize,
    Simulate,
}

fn parse_cond(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VAL")?;
    let value: f64 = value.trim().parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (x, y) = s.split_once(['x', 'X']).ok_or("expected NELXxNELY, e.g. 40x20")?;
    let n = |t: &str| t.parse::<usize>().ok().filter(|&v| v > 0).ok_or(format!("`{t}` is not a positive integer"));
    Ok((n(x)?, n(y)?))
}

fn parse_number(t: &str) -> std::result::Result<f64, String> {
    t.trim().parse().map_err(|_| format!("`{t}` is not a number"))
}

fn parse_axis(s: &str) -> std::result::Result<DimConfig, String> {
    let (name, spec) = s.split_once('=').ok_or("expected NAME=SPEC")?;
    let axis = if let Some((lo, hi)) = spec.split_once("..") {
        AxisConfig::Range { lo: parse_number(lo)?, hi: parse_number(hi)?, endpoints: true }
    } else if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, n] = parts[..] else { return Err("expected lo:hi:n".into()) };
        let n = n.trim().parse().map_err(|_| format!("`{n}` is not a count"))?;
        AxisConfig::Linspace { lo: parse_number(lo)?, hi: parse_number(hi)?, n }
    } else {
        AxisConfig::Levels(spec.split(',').map(parse_number).collect::<std::result::Result<_, _>>()?)
    };
    Ok(DimConfig { name: name.trim().to_string(), axis })
}

fn parse_ratios(s: &str) -> std::result::Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(parse_number).collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three ratios, e.g. 0.7,0.2,0.1".to_string())
}

fn exit_code(e: &Error) -> u8 {
    use designbench_core::Error as C;
    match e {
        Error::Io { .. } => 1,
        Error::Usage(_) | Error::Parse { .. } | Error::Json(_) => 2,
        Error::AllFailed(_) => 4,
        Error::Core(c) => match c {
            C::UnknownProblem(_) => 5,
            C::Constraint(_) => 3,
            C::UnknownCondition(_) | C::InvalidInput(_) | C::Unsupported(_) => 2,
            _ => 4,
        },
    }
}

fn emit(v: &Value) -> Result<()> {
    println!("{}", to_json(v)?);
    Ok(())
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "field": v.field,
        "value": v.value,
        "lo": v.bound_lo,
        "hi": v.bound_hi,
        "category": v.category.to_string(),
        "severity": v.severity.to_string(),
        "message": v.message,
    })
}

fn named(names: impl IntoIterator<Item = String>, values: &[f64]) -> Value {
    Value::Object(names.into_iter().zip(values).map(|(k, v)| (k, json!(v))).collect())
}

fn conditions_json(c: &Conditions) -> Value {
    Value::Object(c.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

struct Session {
    problem: Box<dyn Problem>,
    conds: Conditions,
}

impl Session {
    fn open(common: &Common) -> Result<Self> {
        let mut problem = registry::make_sized(&common.problem, common.size)?;
        problem.reset(common.seed);
        let overrides = Conditions::from_pairs(&common.conds.iter().map(|(k, v)| (k.as_str(), *v)).collect::<Vec<_>>());
        let conds = problem.spec().resolve(&overrides)?;
        Ok(Self { problem, conds })
    }

    fn design(&mut self, path: Option<&Path>, fallback: impl FnOnce(&mut dyn Problem, &Conditions) -> Design) -> Result<Design> {
        match path {
            Some(p) => read_design(p)?.into_design(&self.problem.spec().design_space),
            None => Ok(fallback(self.problem.as_mut(), &self.conds)),
        }
    }

    fn id(&self) -> String {
        self.problem.spec().id()
    }

    fn objective_names(&self) -> Vec<String> {
        self.problem.spec().objectives.iter().map(|o| o.name.clone()).collect()
    }
}

fn report_errors(found: &[Violation]) {
    for v in found {
        eprintln!("{}", v.message);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { common, design } => {
            let mut s = Session::open(&common)?;
            let design = match design {
                Some(p) => Some(s.design(Some(&p), |_, _| unreachable!())?),
                None => None,
            };
            let found = s.problem.check_constraints(design.as_ref(), &s.conds)?;
            let errors = found.iter().filter(|v| v.is_error()).count();
            report_errors(&found);
            emit(&json!({
                "problem": s.id(),
                "violations": found.iter().map(violation_json).collect::<Vec<_>>(),
                "errors": errors,
                "warnings": found.len() - errors,
            }))?;
            if errors > 0 {
                return Err(designbench_core::Error::Constraint(found.into_iter().filter(Violation::is_error).collect()).into());
            }
            Ok(())
        }
        Command::Simulate { common, design } => {
            let mut s = Session::open(&common)?;
            let design = s.design(design.as_deref(), |p, _| p.random_design().0)?;
            let found = s.problem.check_constraints(Some(&design), &s.conds)?;
            let objectives = s.problem.simulate(&design, &s.conds, common.strict)?;
            emit(&json!({
                "problem": s.id(),
                "seed": common.seed,
                "conditions": conditions_json(&s.conds),
                "objectives": named(s.objective_names(), &objectives),
                "violations": found.iter().map(|v| v.message.clone()).collect::<Vec<_>>(),
            }))
        }
        Command::Optimize { common, design, out, nsga2: force_nsga2, pop, generations } => {
            let mut s = Session::open(&common)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::Io { path: out.clone(), source: e })?;
            if force_nsga2 {
                return run_nsga2(&mut s, &common, &out, pop, generations);
            }
            let start = s.design(design.as_deref(), |p, c| p.initial_design(c))?;
            let (best, history) = match s.problem.optimize(&start, &s.conds, common.strict) {
                Err(designbench_core::Error::Unsupported(_)) => return run_nsga2(&mut s, &common, &out, pop, generations),
                r => r?,
            };
            let objectives = s.problem.simulate(&best, &s.conds, false)?;
            let design_path = out.join("design.json");
            let history_path = out.join("history.jsonl");
            write_design(&design_path, &best)?;
            let mut lines = String::new();
            for (i, v) in history.objective_values.iter().enumerate() {
                lines.push_str(&to_json(&json!({"iteration": i, "objectives": v}))?);
                lines.push('\n');
            }
            std::fs::write(&history_path, lines).map_err(|e| Error::Io { path: history_path.clone(), source: e })?;
            emit(&json!({
                "problem": s.id(),
                "seed": common.seed,
                "conditions": conditions_json(&s.conds),
                "iterations": history.iterations,
                "converged": history.converged,
                "objectives": named(s.objective_names(), &objectives),
                "design": design_path,
                "history": history_path,
            }))
        }
        Command::Generate(args) => run_generate(args),
        Command::Evaluate { dataset, reference, metrics } => {
            let generated = read_records(&dataset)?;
            let reference = match &reference {
                Some(p) => read_records(p)?,
                None => generated.clone(),
            };
            let metrics = if metrics.is_empty() { vec![Metric::Mmd2, Metric::Dpp, Metric::Rvc, Metric::Rf] } else { metrics };
            let first = generated.first().ok_or_else(|| Error::Usage("dataset is empty".into()))?;
            let problem = first.problem()?;
            let result = evaluate(&generated, &reference, &metrics, Some(problem.as_ref()))?;
            emit(&json!({
                "problem": first.problem,
                "records": generated.len(),
                "metrics": result,
            }))
        }
        Command::Render { common, design, format, out, fields } => {
            let mut s = Session::open(&common)?;
            let design = s.design(design.as_deref(), |p, c| p.initial_design(c))?;
            let grid = design
                .as_grid()
                .ok_or_else(|| Error::Usage(format!("{} designs are vectors and cannot be drawn", s.id())))?
                .clone();
            let text = match (format, fields) {
                (Format::Pgm, true) => return Err(Error::Usage("--fields needs --format svg".into())),
                (Format::Pgm, false) => pgm(&grid),
                (Format::Svg, false) => svg(&grid),
                (Format::Svg, true) => {
                    let extra = s.problem.diagnostic_fields(&design, &s.conds)?;
                    let mut panels = vec![("design", &grid)];
                    panels.extend(extra.iter().filter(|(n, _)| n != "permittivity").map(|(n, g)| (n.as_str(), g)));
                    svg_panels(&panels)
                }
            };
            std::fs::write(&out, text).map_err(|e| Error::Io { path: out.clone(), source: e })?;
            emit(&json!({ "problem": s.id(), "path": out, "width": grid.nelx, "height": grid.nely }))
        }
    }
}

fn run_nsga2(s: &mut Session, common: &Common, out: &Path, pop: usize, generations: usize) -> Result<()> {
    if common.strict {
        let found = s.problem.check_constraints(None, &s.conds)?;
        let errors: Vec<Violation> = found.into_iter().filter(Violation::is_error).collect();
        if !errors.is_empty() {
            report_errors(&errors);
            return Err(designbench_core::Error::Constraint(errors).into());
        }
    }
    let space = s.problem.spec().design_space.clone();
    let signs: Vec<f64> = s.problem.spec().objectives.iter().map(|o| o.direction.sign()).collect();
    let names = s.objective_names();
    let id = s.id();
    let settings = Nsga2Settings::new(pop, generations);
    let mut evaluator = ProblemEvaluator::new(s.problem.as_mut(), s.conds.clone());
    let result = nsga2(&mut evaluator, &space, &settings, common.seed)?;
    let path = out.join("pareto.jsonl");
    let mut lines = String::new();
    for (x, f) in result.pareto_set.iter().zip(&result.pareto_front) {
        let f: Vec<f64> = f.iter().zip(&signs).map(|(v, s)| v * s).collect();
        lines.push_str(&to_json(&json!({"design": x, "objectives": named(names.clone(), &f)}))?);
        lines.push('\n');
    }
    std::fs::write(&path, lines).map_err(|e| Error::Io { path: path.clone(), source: e })?;
    emit(&json!({
        "problem": id,
        "seed": common.seed,
        "pop_size": pop,
        "generations": generations,
        "evaluations": result.evaluations,
        "front_size": result.pareto_front.len(),
        "pareto": path,
    }))
}

fn run_generate(a: GenerateArgs) -> Result<()> {
    let cfg = match &a.from_manifest {
        Some(p) => read_manifest(p)?.config,
        None => {
            let mut dims = a.axes.clone();
            if a.open_ranges {
                for d in &mut dims {
                    if let AxisConfig::Range { endpoints, .. } = &mut d.axis {
                        *endpoints = false;
                    }
                }
            }
            let kind = match a.plan {
                PlanArg::Grid => PlanKindConfig::Grid,
                PlanArg::Random => PlanKindConfig::Random,
                PlanArg::Lhs => PlanKindConfig::Lhs,
                PlanArg::Corners => PlanKindConfig::Corners,
            };
            let problem = a.problem.clone().expect("clap requires --problem");
            let mut cfg = GenerateConfig::new(&problem, PlanConfig { kind, dims, count: a.count, strata: a.strata });
            cfg.size = a.size;
            cfg.seed = a.seed;
            cfg.strict = a.strict;
            cfg.history = !a.no_history;
            cfg.mode = match a.mode {
                ModeArg::Optimize => Mode::Optimize,
                ModeArg::Simulate => Mode::Simulate,
            };
            cfg.split = match a.holdout {
                Some(k) => SplitConfig::Holdout(k),
                None => SplitConfig::Shuffled(a.split),
            };
            cfg
        }
    };
    let data = match generate(&cfg, a.parallelism) {
        Ok(d) => d,
        Err(Error::AllFailed(m)) => {
            emit(&serde_json::to_value(&*m)?)?;
            return Err(Error::AllFailed(m));
        }
        Err(e) => return Err(e),
    };
    let (records, manifest) = write_dataset(&a.out, &data)?;
    for r in data.records.iter().filter(|r| r.is_failure()) {
        eprintln!("job {} failed: {}", r.index, r.failure.as_deref().unwrap_or(""));
    }
    emit(&json!({
        "problem": data.manifest.problem,
        "records": data.manifest.records,
        "failures": data.manifest.failures,
        "rf": data.manifest.rf(),
        "splits": data.manifest.splits,
        "sha256": data.manifest.sha256,
        "manifest_hash": data.manifest.hash()?,
        "dataset": records,
        "manifest": manifest,
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
