use designbench_core::datagen::*;
use proptest::prelude::*;

fn range(name: &str, lo: f64, hi: f64, endpoints: bool) -> Dimension {
    Dimension::new(name, Axis::Range { lo, hi, endpoints })
}

fn converter_dims() -> Vec<Dimension> {
    let mut dims: Vec<Dimension> = (1..=6).map(|i| range(&format!("C{i}"), 1e-6, 2e-5, false)).collect();
    dims.extend((1..=3).map(|i| range(&format!("L{i}"), 1e-6, 1e-3, false)));
    dims.push(Dimension::new("T1", Axis::Levels((1..=9).map(|k| k as f64 / 10.0).collect())));
    dims
}

#[test]
fn corners_count_matches_converter_part_one() {
    let pts = SamplingPlan::new(PlanKind::Corners, converter_dims()).sample().unwrap();
    assert_eq!(pts.len(), 4608);
    assert!(pts.iter().all(|p| p[0] == 1e-6 || p[0] == 2e-5));
    let mut unique = pts.clone();
    unique.sort_by(|a, b| a.partial_cmp(b).unwrap());
    unique.dedup();
    assert_eq!(unique.len(), 4608);
}

#[test]
fn random_and_lhs_exclude_endpoints() {
    let mut dims = converter_dims();
    dims.pop();
    dims.push(range("T1", 0.1, 0.9, false));
    for kind in [PlanKind::Random, PlanKind::Lhs] {
        let mut plan = SamplingPlan::new(kind, dims.clone()).with_count(4608).with_seed(3);
        if kind == PlanKind::Lhs {
            plan = plan.with_strata(10);
        }
        let pts = plan.sample().unwrap();
        assert_eq!(pts.len(), 4608);
        for p in &pts {
            for (v, d) in p.iter().zip(&dims) {
                let Axis::Range { lo, hi, .. } = d.axis else { unreachable!() };
                assert!(*v > lo && *v < hi);
            }
        }
    }
}

#[test]
fn lhs_with_ten_strata_is_balanced() {
    let plan = SamplingPlan::new(PlanKind::Lhs, vec![range("a", 0.0, 1.0, false), range("b", -5.0, 5.0, false)])
        .with_count(4608)
        .with_strata(10)
        .with_seed(8);
    let pts = plan.sample().unwrap();
    for (k, (lo, hi)) in [(0.0, 1.0), (-5.0, 5.0)].into_iter().enumerate() {
        let mut counts = [0usize; 10];
        for p in &pts {
            counts[(((p[k] - lo) / (hi - lo)) * 10.0) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 460 || c == 461), "{counts:?}");
    }
}

#[test]
fn heat_conduction_grid_and_holdout() {
    let dims = vec![
        Dimension::new("volume", Axis::Linspace { lo: 0.3, hi: 0.6, n: 21 }),
        Dimension::new("length", Axis::Linspace { lo: 0.0, hi: 1.0, n: 21 }),
    ];
    let pts = SamplingPlan::new(PlanKind::Grid, dims).sample().unwrap();
    assert_eq!(pts.len(), 441);
    let tags = split_holdout(&pts, 2, 5).unwrap();
    let c = SplitCounts::of(&tags);
    assert_eq!((c.train, c.val, c.test), (361, 40, 40));
    // held-out values never reach Train
    for k in 0..2 {
        let train_vals: Vec<f64> = pts.iter().zip(&tags).filter(|(_, t)| **t == Split::Train).map(|(p, _)| p[k]).collect();
        let held: Vec<f64> = pts.iter().zip(&tags).filter(|(_, t)| **t != Split::Train).map(|(p, _)| p[k]).collect();
        let only_held: Vec<&f64> = held.iter().filter(|v| !train_vals.contains(v)).collect();
        assert!(!only_held.is_empty());
    }
    assert_eq!(split_holdout(&pts, 2, 5).unwrap(), tags);
}

#[test]
fn shuffled_split_partitions_exactly() {
    let n = 4608 * 3;
    let tags = split_shuffled(n, [0.7, 0.2, 0.1], 1).unwrap();
    let c = SplitCounts::of(&tags);
    assert_eq!(c.train, (0.7 * n as f64).round() as usize);
    assert_eq!(c.val, (0.2 * n as f64).round() as usize);
    assert_eq!(c.train + c.val + c.test, n);
    assert_eq!(split_shuffled(n, [0.7, 0.2, 0.1], 1).unwrap(), tags);
    assert_ne!(split_shuffled(n, [0.7, 0.2, 0.1], 2).unwrap(), tags);
    assert!(split_shuffled(10, [1.0, 0.0, 0.0], 0).unwrap().iter().all(|t| *t == Split::Train));
    assert!(split_shuffled(10, [0.5, 0.2, 0.2], 0).is_err());
}

#[test]
fn seeded_plans_are_reproducible() {
    let plan = SamplingPlan::new(PlanKind::Random, converter_dims()).with_count(50).with_seed(12);
    assert_eq!(plan.sample().unwrap(), plan.sample().unwrap());
    assert_ne!(plan.sample().unwrap(), plan.clone().with_seed(13).sample().unwrap());
}

proptest! {
    #[test]
    fn lhs_fills_every_stratum(n in 1usize..200, seed in any::<u64>()) {
        let plan = SamplingPlan::new(PlanKind::Lhs, vec![range("a", 0.0, 1.0, true), range("b", 2.0, 3.0, false)])
            .with_count(n)
            .with_seed(seed);
        let pts = plan.sample().unwrap();
        for (k, lo) in [(0usize, 0.0), (1, 2.0)] {
            let mut seen = vec![false; n];
            for p in &pts {
                let s = (((p[k] - lo) * n as f64) as usize).min(n - 1);
                prop_assert!(!seen[s], "stratum {s} used twice");
                seen[s] = true;
            }
        }
    }

    #[test]
    fn shuffled_split_is_a_partition(n in 0usize..500, a in 0.0f64..1.0, seed in any::<u64>()) {
        let b = (1.0 - a) / 2.0;
        let tags = split_shuffled(n, [a, b, 1.0 - a - b], seed).unwrap();
        let c = SplitCounts::of(&tags);
        prop_assert_eq!(c.train + c.val + c.test, n);
        prop_assert_eq!(c.train, (a * n as f64).round() as usize);
    }
}
