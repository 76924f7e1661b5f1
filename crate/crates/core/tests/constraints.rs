//! Constraint tables, rendered row by row and frozen, plus the message
//! goldens for the error-handling examples.

use std::time::Instant;

use designbench_core::problem::{evaluate_rows, Category, ConstraintRow, Quantity, Severity};
use designbench_core::problem::{Conditions, Design, Grid, Problem};
use designbench_core::registry::{make, make_sized, PROBLEM_IDS};

fn render(row: &ConstraintRow) -> String {
    format!(
        "{} ∈ {} ({}, {})",
        row.quantity.field_name(),
        row.interval.render(row.integer),
        row.category,
        row.severity
    )
}

fn table(p: &dyn Problem) -> Vec<String> {
    let conds = p.spec().default_conditions();
    p.constraint_rows(&conds).iter().map(render).collect()
}

/// `[problem-id]` headers, each followed by that problem's rendered rows.
fn golden() -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for line in include_str!("fixtures/constraint_tables.txt").lines().filter(|l| !l.is_empty()) {
        match line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            Some(id) => out.push((id.to_string(), Vec::new())),
            None => out.last_mut().unwrap().1.push(line.to_string()),
        }
    }
    out
}

fn messages(v: &[designbench_core::problem::Violation]) -> Vec<&str> {
    v.iter().map(|x| x.message.as_str()).collect()
}

#[test]
fn tables_match_golden() {
    let golden = golden();
    assert_eq!(golden.iter().map(|(id, _)| id.as_str()).collect::<Vec<_>>(), PROBLEM_IDS);
    let mut rows = 0;
    for (id, expected) in &golden {
        let p = make(id).unwrap();
        assert_eq!(&table(p.as_ref()), expected, "{id}");
        rows += expected.len();
    }
    assert!(rows >= 25, "{rows} rows");
}

#[test]
fn volfrac_two_gives_exactly_two_findings() {
    let p = make("beams2d/v0").unwrap();
    let found = p.check_constraints(None, &Conditions::from_pairs(&[("volfrac", 2.0)])).unwrap();
    assert_eq!(
        messages(&found),
        [
            "Config.volfrac: 2.0 ∉ [0.0, 1.0] (Theory, error)",
            "Config.volfrac: 2.0 ∉ [0.1, 0.9] (Implementation, warning)",
        ]
    );
    assert_eq!((found[0].category, found[0].severity), (Category::Theory, Severity::Error));
    assert_eq!((found[1].category, found[1].severity), (Category::Implementation, Severity::Warning));
    assert_eq!(found[0].field, "Config.volfrac");
    assert_eq!((found[0].bound_lo, found[0].bound_hi), (0.0, 1.0));
}

#[test]
fn defaults_are_clean() {
    for id in PROBLEM_IDS {
        let p = make(id).unwrap();
        let found = p.check_constraints(None, &p.spec().default_conditions()).unwrap();
        assert!(found.is_empty(), "{id}: {:?}", messages(&found));
    }
}

#[test]
fn filter_radius_against_grid() {
    let p = make_sized("beams2d/v0", Some((100, 50))).unwrap();
    let found = p.check_constraints(None, &Conditions::from_pairs(&[("rmin", 60.0)])).unwrap();
    assert_eq!(
        messages(&found),
        [
            "Config.rmin: 60.0 ∉ (0.0, 50.0) (Implementation, error)",
            "Config.rmin: 60.0 ∉ [1.0, 10.0] (Implementation, warning)",
        ]
    );
    // just inside the open bound
    let found = p.check_constraints(None, &Conditions::from_pairs(&[("rmin", 49.9)])).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].severity, Severity::Warning);
    let found = p.check_constraints(None, &Conditions::from_pairs(&[("rmin", 50.0)])).unwrap();
    assert!(found.iter().any(|v| v.is_error()));
}

#[test]
fn small_grids_are_flagged() {
    let p = make_sized("beams2d/v0", Some((8, 4))).unwrap();
    let found = p.check_constraints(None, &p.spec().default_conditions()).unwrap();
    assert_eq!(
        messages(&found),
        ["Config.nelx: 8 ∉ [10, 1000] (Implementation, warning)", "Config.nely: 4 ∉ [10, 1000] (Implementation, warning)"]
    );
    let p = make_sized("photonics2d/v0", Some((60, 100))).unwrap();
    let found = p.check_constraints(None, &p.spec().default_conditions()).unwrap();
    assert_eq!(
        messages(&found),
        [
            "Config.nelx: 60 ∉ (60, inf) (Implementation, error)",
            "Config.nely: 100 ∉ [105, inf) (Implementation, error)",
            "Config.nelx: 60 ∉ [90, 200] (Implementation, warning)",
            "Config.nely: 100 ∉ [110, 300] (Implementation, warning)",
        ]
    );
}

/// Every config row with a finite bound fires on a probe just outside it,
/// and only rows on that quantity fire.
#[test]
fn every_config_row_fires() {
    let mut probed = 0;
    for id in PROBLEM_IDS {
        let p = make(id).unwrap();
        let conds = p.spec().default_conditions();
        let rows = p.constraint_rows(&conds);
        let params = p.parameters();
        for (i, row) in rows.iter().enumerate() {
            let Quantity::Config(name) = &row.quantity else { continue };
            let below = row.interval.lo - 1.0;
            let above = row.interval.hi + 1.0;
            for probe in [below, above] {
                if !probe.is_finite() {
                    continue;
                }
                let mut c = conds.clone();
                let mut ps = params.clone();
                if c.get(name).is_some() {
                    c.set(name, probe);
                } else {
                    ps.iter_mut().find(|(n, _)| n == name).unwrap().1 = probe;
                }
                let found = evaluate_rows(&rows, None, &c, &ps);
                let own = row.check(None, &|n: &str| c.get(n).or_else(|| ps.iter().find(|(k, _)| k == n).map(|x| x.1)));
                let own = own.unwrap_or_else(|| panic!("{id} row {i} silent at {probe}"));
                assert!(found.contains(&own), "{id} row {i}");
                assert!(found.iter().all(|v| v.field == format!("Config.{name}")), "{id} row {i}");
                probed += 1;
            }
        }
    }
    assert!(probed >= 30, "{probed}");
}

#[test]
fn design_rows_fire() {
    let p = make_sized("beams2d/v0", Some((12, 10))).unwrap();
    let conds = p.spec().default_conditions();
    let mut g = Grid::filled(10, 12, 0.3);
    let ok = Design::Grid(g.clone());
    assert!(p.check_constraints(Some(&ok), &conds).unwrap().is_empty());
    g = Grid::filled(10, 12, 0.5);
    let heavy = Design::Grid(g.clone());
    assert_eq!(
        messages(&p.check_constraints(Some(&heavy), &conds).unwrap()),
        ["Design.volume_fraction: 0.5 ∉ [0.0, 0.351] (Theory, warning)"]
    );
    let mut data = vec![0.3; 120];
    data[7] = 1.5;
    let bad = Design::Grid(Grid::new(10, 12, data).unwrap());
    let found = p.check_constraints(Some(&bad), &conds).unwrap();
    assert_eq!(found[0].message, "Design: 1.5 ∉ [0.0, 1.0] (Theory, error)");

    let pe = make("powerelectronics/v0").unwrap();
    let mut x = vec![1e-5; 6];
    x.extend([1e-4, 1e-4, 1e-4, 0.95]);
    let found = pe.check_constraints(Some(&Design::Vector(x)), &Conditions::new()).unwrap();
    assert_eq!(messages(&found), ["Design.T1: 0.95 ∉ [0.1, 0.9] (Theory, error)"]);
}

#[test]
fn unknown_condition_is_an_input_error() {
    let p = make("beams2d/v0").unwrap();
    assert!(p.check_constraints(None, &Conditions::from_pairs(&[("volfraq", 0.3)])).is_err());
}

#[test]
fn checks_are_fast() {
    let t = Instant::now();
    for id in PROBLEM_IDS {
        let p = make(id).unwrap();
        let (d, c) = designbench_core::problem::random_design(p.spec(), 0);
        for _ in 0..100 {
            p.check_constraints(Some(&d), &c).unwrap();
        }
    }
    assert!(t.elapsed().as_secs_f64() < 1.0, "{:?}", t.elapsed());
}
