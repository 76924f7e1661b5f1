use designbench_core::metrics::KernelParams;
use designbench_core::moo::*;
use designbench_core::DesignSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Quadratic rank oracle: peel off the non-dominated set repeatedly.
fn brute_force_ranks(objs: &[Vec<f64>]) -> Vec<usize> {
    let mut ranks = vec![usize::MAX; objs.len()];
    let mut r = 0;
    while ranks.iter().any(|&x| x == usize::MAX) {
        let layer: Vec<usize> = (0..objs.len())
            .filter(|&i| ranks[i] == usize::MAX)
            .filter(|&i| !(0..objs.len()).any(|j| ranks[j] == usize::MAX && dominates(&objs[j], &objs[i])))
            .collect();
        for i in layer {
            ranks[i] = r;
        }
        r += 1;
    }
    ranks
}

#[test]
fn sort_matches_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=50);
        let m = rng.gen_range(2..=4);
        // a coarse lattice produces ties and duplicates
        let objs: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..6) as f64).collect()).collect();
        assert_eq!(fast_nondominated_sort(&objs), brute_force_ranks(&objs));
    }
}

#[test]
fn crowding_is_permutation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let front: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.gen(), rng.gen()]).collect();
    let d = crowding_distance(&front);
    let perm: Vec<usize> = (0..12).rev().collect();
    let shuffled: Vec<Vec<f64>> = perm.iter().map(|&i| front[i].clone()).collect();
    let ds = crowding_distance(&shuffled);
    for (k, &i) in perm.iter().enumerate() {
        assert_eq!(ds[k], d[i]);
    }
}

fn unit_box(d: usize) -> DesignSpace {
    DesignSpace::uniform(0.0, 1.0, vec![d])
}

#[test]
fn single_objective_converges() {
    let mut f = |x: &[f64]| Some(vec![x[0]]);
    let r = nsga2(&mut f, &unit_box(1), &Nsga2Settings::new(20, 50), 1).unwrap();
    assert!(r.pareto_set.iter().all(|x| x[0] <= 0.01), "{:?}", r.pareto_set);
}

#[test]
fn conflicting_objectives_span_the_front() {
    let mut f = |x: &[f64]| Some(vec![x[0], 1.0 - x[0]]);
    let r = nsga2(&mut f, &unit_box(1), &Nsga2Settings::new(20, 50), 7).unwrap();
    let xs: Vec<f64> = r.pareto_set.iter().map(|x| x[0]).collect();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(lo <= 0.05 && hi >= 0.95, "[{lo}, {hi}]");
    let mut distinct = xs.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    assert!(distinct.len() >= 10, "{}", distinct.len());
}

#[test]
fn runs_are_seed_deterministic() {
    let zdt1 = |x: &[f64]| {
        let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
        Some(vec![x[0], g * (1.0 - (x[0] / g).sqrt())])
    };
    let a = nsga2(&mut { zdt1 }, &unit_box(5), &Nsga2Settings::new(24, 30), 99).unwrap();
    let b = nsga2(&mut { zdt1 }, &unit_box(5), &Nsga2Settings::new(24, 30), 99).unwrap();
    assert_eq!(format!("{:?}", a), format!("{:?}", b));
    let c = nsga2(&mut { zdt1 }, &unit_box(5), &Nsga2Settings::new(24, 30), 100).unwrap();
    assert_ne!(a.pareto_set, c.pareto_set);
}

/// No front point is ever dominated by an earlier front. While the merged
/// non-dominated set fits in the population, every earlier front point is
/// also kept or dominated; past that, crowding truncation may drop some.
#[test]
fn elitism_never_regresses() {
    let mut f = |x: &[f64]| Some(vec![x[0] * x[0] + x[1], (x[0] - 1.0).powi(2) + x[1] * x[1]]);
    let n = 16;
    let r = nsga2(&mut f, &DesignSpace::uniform(-1.0, 2.0, vec![2]), &Nsga2Settings::new(n, 25), 5).unwrap();
    let mut strong_checks = 0;
    for w in r.history.windows(2) {
        for q in &w[1].front {
            assert!(!w[0].front.iter().any(|p| dominates(p, q)), "regressed to {q:?}");
        }
        if w[1].front.len() < n {
            strong_checks += 1;
            for p in &w[0].front {
                assert!(w[1].front.iter().any(|q| q == p || dominates(q, p)), "lost {p:?}");
            }
        }
    }
    assert!(strong_checks > 0);
}

#[test]
fn failures_never_enter_the_front() {
    let mut calls = 0;
    let mut f = |x: &[f64]| {
        calls += 1;
        if x[0] < 0.3 {
            None
        } else {
            Some(vec![x[0], 1.0 - x[0] + x[1]])
        }
    };
    let r = nsga2(&mut f, &unit_box(2), &Nsga2Settings::new(20, 20), 2).unwrap();
    assert!(r.pareto_set.iter().all(|x| x[0] >= 0.3));
    assert!(r.pareto_front.iter().flatten().all(|v| v.is_finite()));
    assert!(r.history[0].failures > 0);
    assert_eq!(r.evaluations, 20 * 21);
}

#[test]
fn designs_stay_in_bounds() {
    let space = DesignSpace::new(vec![-2.0, 0.5, 3.0], vec![-1.0, 0.5, 10.0], vec![3], designbench_core::DesignKind::Continuous)
        .unwrap();
    let mut seen = Vec::new();
    let mut f = |x: &[f64]| {
        seen.push(x.to_vec());
        Some(vec![x[0] + x[2], -x[2]])
    };
    nsga2(&mut f, &space, &Nsga2Settings::new(10, 15), 4).unwrap();
    for x in seen {
        assert!((-2.0..=-1.0).contains(&x[0]) && x[1] == 0.5 && (3.0..=10.0).contains(&x[2]));
    }
}

#[test]
fn contract_violations_are_errors() {
    struct Short;
    impl Evaluator for Short {
        fn evaluate(&mut self, batch: &[Vec<f64>]) -> Vec<Option<Vec<f64>>> {
            vec![Some(vec![0.0]); batch.len() - 1]
        }
    }
    assert!(nsga2(&mut Short, &unit_box(1), &Nsga2Settings::new(4, 1), 0).is_err());
    let mut f = |x: &[f64]| Some(vec![x[0]]);
    assert!(nsga2(&mut f, &unit_box(1), &Nsga2Settings::new(5, 1), 0).is_err());
    let mut none = |_: &[f64]| None;
    assert!(nsga2(&mut none, &unit_box(1), &Nsga2Settings::new(4, 1), 0).is_err());
}

#[test]
fn front_comparison() {
    let mut f = |x: &[f64]| Some(vec![x[0], 1.0 - x[0].sqrt()]);
    let r = nsga2(&mut f, &unit_box(1), &Nsga2Settings::new(20, 20), 11).unwrap();
    let kp = KernelParams::default();
    let same = compare_fronts(&r.pareto_front, &r.pareto_front, &kp, 200, 1).unwrap();
    assert!(same.statistic.abs() < 0.1 && same.p_value > 0.5, "{same:?}");
    let sigma = same.sigma;
    let shifted: Vec<Vec<f64>> = r.pareto_front.iter().map(|p| p.iter().map(|v| v + 10.0 * sigma).collect()).collect();
    let kp = KernelParams::fixed(sigma);
    let far = compare_fronts(&r.pareto_front, &shifted, &kp, 200, 1).unwrap();
    assert_eq!(far.p_value, 1.0 / 201.0);
    let back = compare_fronts(&shifted, &r.pareto_front, &kp, 200, 1).unwrap();
    assert_eq!(back.statistic, far.statistic);
}
