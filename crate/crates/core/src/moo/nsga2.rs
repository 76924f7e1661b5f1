use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{crowding_distance, fronts, polynomial_mutation, sbx_crossover};
use crate::metrics::{mmd2_permutation_test, KernelParams, PermutationTest, SampleSet};
use crate::problem::{Conditions, Design, DesignSpace, Problem};
use crate::{Error, Result};

/// Batch objective function. All objectives are minimised; `None` marks a
/// failed evaluation.
pub trait Evaluator {
    fn evaluate(&mut self, batch: &[Vec<f64>]) -> Vec<Option<Vec<f64>>>;
}

impl<F: FnMut(&[f64]) -> Option<Vec<f64>>> Evaluator for F {
    fn evaluate(&mut self, batch: &[Vec<f64>]) -> Vec<Option<Vec<f64>>> {
        batch.iter().map(|x| self(x)).collect()
    }
}

/// Simulator-backed evaluator; Maximize objectives are negated.
pub struct ProblemEvaluator<'a> {
    pub problem: &'a mut dyn Problem,
    pub conditions: Conditions,
}

impl<'a> ProblemEvaluator<'a> {
    pub fn new(problem: &'a mut dyn Problem, conditions: Conditions) -> Self {
        Self { problem, conditions }
    }
}

impl Evaluator for ProblemEvaluator<'_> {
    fn evaluate(&mut self, batch: &[Vec<f64>]) -> Vec<Option<Vec<f64>>> {
        let space = self.problem.spec().design_space.clone();
        let signs: Vec<f64> = self.problem.spec().objectives.iter().map(|o| o.direction.sign()).collect();
        batch
            .iter()
            .map(|x| {
                let d = Design::from_space(&space, x.clone()).ok()?;
                let f = self.problem.simulate(&d, &self.conditions, false).ok()?;
                Some(f.iter().zip(&signs).map(|(v, s)| v * s).collect())
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nsga2Settings {
    pub pop_size: usize,
    pub generations: usize,
    pub eta_crossover: f64,
    pub p_crossover: f64,
    pub eta_mutation: f64,
    /// Per-variable mutation probability; `None` means 1/d.
    pub p_mutation: Option<f64>,
}

impl Nsga2Settings {
    pub fn new(pop_size: usize, generations: usize) -> Self {
        Self { pop_size, generations, eta_crossover: 15.0, p_crossover: 0.9, eta_mutation: 20.0, p_mutation: None }
    }
}

/// Non-dominated set of one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generation {
    pub front: Vec<Vec<f64>>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Result {
    pub pareto_set: Vec<Vec<f64>>,
    pub pareto_front: Vec<Vec<f64>>,
    pub history: Vec<Generation>,
    pub evaluations: usize,
}

struct Individual {
    x: Vec<f64>,
    f: Vec<f64>,
    failed: bool,
    rank: usize,
    crowding: f64,
}

fn evaluate_batch(ev: &mut dyn Evaluator, xs: Vec<Vec<f64>>, n_obj: &mut Option<usize>) -> Result<Vec<Individual>> {
    let out = ev.evaluate(&xs);
    if out.len() != xs.len() {
        return Err(Error::invalid(format!("evaluator returned {} results for {} designs", out.len(), xs.len())));
    }
    let mut pop = Vec::with_capacity(xs.len());
    for (x, f) in xs.into_iter().zip(out) {
        match f {
            Some(f) if f.iter().all(|v| !v.is_nan()) => {
                match *n_obj {
                    None => *n_obj = Some(f.len()),
                    Some(m) if m != f.len() => {
                        return Err(Error::invalid(format!("evaluator returned {} objectives, expected {m}", f.len())));
                    }
                    _ => {}
                }
                pop.push(Individual { x, f, failed: false, rank: 0, crowding: 0.0 });
            }
            _ => pop.push(Individual { x, f: Vec::new(), failed: true, rank: 0, crowding: 0.0 }),
        }
    }
    Ok(pop)
}

/// Fills failed objective vectors with +∞ once the objective count is known.
fn penalise(pop: &mut [Individual], n_obj: Option<usize>) -> Result<()> {
    let m = n_obj.ok_or_else(|| Error::Simulation("every evaluation failed".into()))?;
    for ind in pop.iter_mut().filter(|i| i.failed) {
        ind.f = vec![f64::INFINITY; m];
    }
    Ok(())
}

/// Assigns rank and crowding, and returns the indices of the best
/// `keep` individuals in selection order.
fn rank_and_select(pop: &mut [Individual], keep: usize) -> Vec<usize> {
    let objs: Vec<Vec<f64>> = pop.iter().map(|i| i.f.clone()).collect();
    let mut chosen = Vec::with_capacity(keep);
    for (r, front) in fronts(&objs).into_iter().enumerate() {
        let pts: Vec<Vec<f64>> = front.iter().map(|&i| objs[i].clone()).collect();
        let cd = crowding_distance(&pts);
        for (k, &i) in front.iter().enumerate() {
            pop[i].rank = r;
            pop[i].crowding = cd[k];
        }
        if chosen.len() < keep {
            let mut order = front.clone();
            if chosen.len() + order.len() > keep {
                order.sort_by(|&a, &b| pop[b].crowding.total_cmp(&pop[a].crowding).then(a.cmp(&b)));
                order.truncate(keep - chosen.len());
            }
            chosen.extend(order);
        }
    }
    chosen
}

fn tournament<'p>(pop: &'p [Individual], rng: &mut ChaCha8Rng) -> &'p Individual {
    let (a, b) = (&pop[rng.gen_range(0..pop.len())], &pop[rng.gen_range(0..pop.len())]);
    if a.rank != b.rank {
        return if a.rank < b.rank { a } else { b };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { a } else { b };
    }
    if rng.gen::<bool>() {
        a
    } else {
        b
    }
}

fn front_of(pop: &[Individual]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    pop.iter().filter(|i| i.rank == 0 && !i.failed).map(|i| (i.x.clone(), i.f.clone())).unzip()
}

/// Runs NSGA-II and returns the final non-dominated set. Failed
/// evaluations rank last and never appear in the result.
pub fn nsga2(
    evaluator: &mut dyn Evaluator,
    space: &DesignSpace,
    settings: &Nsga2Settings,
    seed: u64,
) -> Result<Nsga2Result> {
    let n = settings.pop_size;
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid("population size must be even and at least 2"));
    }
    if settings.generations == 0 {
        return Err(Error::invalid("need at least one generation"));
    }
    let d = space.len();
    let (lower, upper): (Vec<f64>, Vec<f64>) = (0..d).map(|i| space.bounds(i)).unzip();
    let p_mut = settings.p_mutation.unwrap_or(1.0 / d.max(1) as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_obj = None;

    let init: Vec<Vec<f64>> = (0..n).map(|_| space.sample(&mut rng)).collect();
    let mut pop = evaluate_batch(evaluator, init, &mut n_obj)?;
    let mut evaluations = n;
    let mut history = Vec::with_capacity(settings.generations + 1);
    penalise(&mut pop, n_obj)?;
    rank_and_select(&mut pop, n);
    history.push(Generation { front: front_of(&pop).1, failures: pop.iter().filter(|i| i.failed).count() });

    for _ in 0..settings.generations {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let mut c1 = tournament(&pop, &mut rng).x.clone();
            let mut c2 = tournament(&pop, &mut rng).x.clone();
            sbx_crossover(&mut c1, &mut c2, &lower, &upper, settings.eta_crossover, settings.p_crossover, &mut rng);
            polynomial_mutation(&mut c1, &lower, &upper, settings.eta_mutation, p_mut, &mut rng);
            polynomial_mutation(&mut c2, &lower, &upper, settings.eta_mutation, p_mut, &mut rng);
            children.push(c1);
            children.push(c2);
        }
        let mut offspring = evaluate_batch(evaluator, children, &mut n_obj)?;
        evaluations += n;
        penalise(&mut offspring, n_obj)?;
        let failures = offspring.iter().filter(|i| i.failed).count();
        pop.extend(offspring);
        let keep = rank_and_select(&mut pop, n);
        let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
        pop = keep.into_iter().map(|i| slots[i].take().expect("selected once")).collect();
        rank_and_select(&mut pop, n);
        history.push(Generation { front: front_of(&pop).1, failures });
    }
    let (pareto_set, pareto_front) = front_of(&pop);
    Ok(Nsga2Result { pareto_set, pareto_front, history, evaluations })
}

/// MMD² permutation test between two fronts in objective space.
pub fn compare_fronts(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    kp: &KernelParams,
    n_perms: usize,
    seed: u64,
) -> Result<PermutationTest> {
    let (sa, sb) = (SampleSet::new(a.to_vec())?, SampleSet::new(b.to_vec())?);
    mmd2_permutation_test(&sa, &sb, kp, n_perms, seed)
}
