use designbench_core::circuits::*;
use designbench_core::{registry, Design, Error};

const RC: f64 = 1e-3;

fn rc_circuit() -> Netlist {
    let mut n = Netlist::new();
    n.add(ElementKind::VoltageSource, "V1", 1, 0, &[1.0])
        .add(ElementKind::Resistor, "R1", 1, 2, &[1e3])
        .add(ElementKind::Capacitor, "C1", 2, 0, &[1e-6]);
    n.load = Some("C1".into());
    n
}

fn rc_error(dt: f64, method: Integration) -> (f64, f64) {
    let s = TransientSettings { t_start: 0.0, t_end: 5.0 * RC, dt, method };
    let r = transient(&rc_circuit(), &s).unwrap();
    let max = r
        .times
        .iter()
        .zip(&r.v_load)
        .map(|(t, v)| (v - (1.0 - (-t / RC).exp())).abs())
        .fold(0.0, f64::max);
    // error at t = RC, a point on every grid used here
    let k = (RC / dt).round() as usize;
    (max, (r.v_load[k] - (1.0 - (-1.0f64).exp())).abs())
}

#[test]
fn rc_charging_matches_analytic() {
    let (max, _) = rc_error(RC / 100.0, Integration::Trapezoidal);
    assert!(max <= 1e-3, "{max}");
    let s = TransientSettings { t_start: 0.0, t_end: 5.0 * RC, dt: RC / 100.0, method: Integration::Trapezoidal };
    let r = transient(&rc_circuit(), &s).unwrap();
    assert_eq!(r.times.len(), 501);
    assert_eq!(r.times[0], 0.0);
    assert_eq!(*r.times.last().unwrap(), 5.0 * RC);
    assert!(r.times.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn trapezoidal_is_second_order() {
    let (_, e1) = rc_error(RC / 50.0, Integration::Trapezoidal);
    let (_, e2) = rc_error(RC / 100.0, Integration::Trapezoidal);
    let (_, e3) = rc_error(RC / 200.0, Integration::Trapezoidal);
    for ratio in [e1 / e2, e2 / e3] {
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }
}

#[test]
fn backward_euler_is_first_order() {
    let (_, e1) = rc_error(RC / 50.0, Integration::BackwardEuler);
    let (_, e2) = rc_error(RC / 100.0, Integration::BackwardEuler);
    let (_, e3) = rc_error(RC / 200.0, Integration::BackwardEuler);
    for ratio in [e1 / e2, e2 / e3] {
        assert!((1.8..=2.2).contains(&ratio), "{ratio}");
    }
}

#[test]
fn rl_current_rise() {
    let (r, l, v) = (10.0, 1e-3, 5.0);
    let tau = l / r;
    let mut n = Netlist::new();
    n.add(ElementKind::VoltageSource, "V1", 1, 0, &[v])
        .add(ElementKind::Resistor, "R1", 1, 2, &[r])
        .add(ElementKind::Inductor, "L1", 2, 0, &[l]);
    let s = TransientSettings { t_start: 0.0, t_end: 5.0 * tau, dt: tau / 200.0, method: Integration::Trapezoidal };
    let res = transient(&n, &s).unwrap();
    let i = res.current("L1").unwrap();
    let err = res.times.iter().zip(i).map(|(t, i)| (i - v / r * (1.0 - (-t / tau).exp())).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-4 * v / r, "{err}");
}

#[test]
fn initial_conditions_are_honoured() {
    // a charged capacitor discharging through a resistor
    let mut n = Netlist::new();
    n.add(ElementKind::Capacitor, "C1", 1, 0, &[1e-6, 2.0]).add(ElementKind::Resistor, "R1", 1, 0, &[1e3]);
    let s = TransientSettings { t_start: 0.0, t_end: RC, dt: RC / 400.0, method: Integration::Trapezoidal };
    let r = transient(&n, &s).unwrap();
    assert_eq!(r.node_voltages[1][0], 2.0);
    let end = *r.node_voltages[1].last().unwrap();
    assert!((end - 2.0 * (-1.0f64).exp()).abs() < 1e-5);
}

/// Source-free RLC: stored energy never grows under backward Euler.
#[test]
fn passive_network_dissipates() {
    let (c, l) = (2e-6, 5e-4);
    let mut n = Netlist::new();
    n.add(ElementKind::Capacitor, "C1", 1, 0, &[c, 10.0])
        .add(ElementKind::Inductor, "L1", 1, 2, &[l, -0.3])
        .add(ElementKind::Resistor, "R1", 2, 0, &[3.0])
        .add(ElementKind::Diode, "D1", 1, 0, &[]);
    let s = TransientSettings { t_start: 0.0, t_end: 2e-3, dt: 1e-6, method: Integration::BackwardEuler };
    let r = transient(&n, &s).unwrap();
    let il = r.current("L1").unwrap();
    let energy: Vec<f64> =
        r.node_voltages[1].iter().zip(il).map(|(v, i)| 0.5 * c * v * v + 0.5 * l * i * i).collect();
    for w in energy.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{} -> {}", w[0], w[1]);
    }
    assert!(energy.last().unwrap() < &(0.01 * energy[0]));
}

fn waveform(times: Vec<f64>, v: Vec<f64>) -> TransientResult {
    TransientResult { node_voltages: Vec::new(), currents: Vec::new(), times, v_load: v }
}

#[test]
fn dc_gain_of_reference_waveforms() {
    let t: Vec<f64> = (0..=600).map(|k| 1e-3 + k as f64 * 1e-7).collect();
    let flat = waveform(t.clone(), vec![250.0; t.len()]);
    assert_eq!(dc_gain(&flat, 1000.0).unwrap(), 0.25);
    assert_eq!(voltage_ripple(&flat).unwrap(), 0.0);
    let ramp = waveform(t.clone(), (0..=600).map(|k| 100.0 * k as f64 / 600.0).collect());
    assert!((dc_gain(&ramp, 1000.0).unwrap() - 0.05).abs() < 1e-12);
    let scaled = waveform(t.clone(), ramp.v_load.iter().map(|v| 3.0 * v).collect());
    assert!((dc_gain(&scaled, 1000.0).unwrap() - 0.15).abs() < 1e-12);
}

#[test]
fn ripple_of_a_sine() {
    let n = 20_000;
    let t: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let v: Vec<f64> = t.iter().map(|t| 10.0 + (2.0 * std::f64::consts::PI * 5.0 * t).sin()).collect();
    let w = waveform(t.clone(), v.clone());
    let r = voltage_ripple(&w).unwrap();
    assert!((r - 0.2).abs() < 1e-3, "{r}");
    let scaled = waveform(t, v.iter().map(|x| 7.5 * x).collect());
    assert!((voltage_ripple(&scaled).unwrap() - r).abs() <= 1e-14 * r);
}

#[test]
fn degenerate_inputs_are_errors() {
    let zero = waveform(vec![0.0, 1.0, 2.0], vec![0.0; 3]);
    assert!(voltage_ripple(&zero).is_err());
    assert!(dc_gain(&zero, 0.0).is_err());
    assert!(dc_gain(&waveform(vec![1.0], vec![1.0]), 1.0).is_err());
}

#[test]
fn reference_converter_composition() {
    let d = ConverterDesign { capacitances: [1e-5; 6], inductances: [1e-4; 3], duty: 0.5 };
    let n = converter_netlist(&d, &ConverterSettings::default());
    n.validate().unwrap();
    assert_eq!(n.count(ElementKind::Switch), 5);
    assert_eq!(n.count(ElementKind::Diode), 4);
    assert_eq!(n.count(ElementKind::Inductor), 3);
    assert_eq!(n.count(ElementKind::Capacitor), 6);
    let s = n.schedule.as_ref().unwrap();
    let initial: Vec<bool> = ["S1", "S2", "S3", "S4", "S5"].iter().map(|w| s.is_on(s.phase(w).unwrap(), 0, 200)).collect();
    assert_eq!(initial, [true, false, true, true, false]);
}

#[test]
fn out_of_bounds_design_is_a_theory_error() {
    let mut p = registry::make("powerelectronics/v0").unwrap();
    let mut x = vec![1e-5; 6];
    x.extend([1e-4; 3]);
    x.push(0.5);
    x[0] = 1e-7;
    let d = Design::Vector(x);
    let found = p.check_constraints(Some(&d), &Default::default()).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].message, "Design.C1: 1e-07 ∉ [1e-06, 2e-05] (Theory, error)");
    // rejected before any stepping
    let start = std::time::Instant::now();
    assert!(matches!(p.simulate(&d, &Default::default(), true), Err(Error::Constraint(_))));
    assert!(start.elapsed().as_millis() < 50);
    assert!(matches!(p.optimize(&d, &Default::default(), false), Err(Error::Unsupported(_))));
}

fn golden_design() -> ConverterDesign {
    ConverterDesign {
        capacitances: [1e-5, 4.7e-6, 1e-5, 2.2e-6, 1e-5, 1.5e-5],
        inductances: [2.2e-4, 1e-4, 4.7e-5],
        duty: 0.5,
    }
}

#[test]
fn converter_is_deterministic_and_matches_golden() {
    let s = ConverterSettings::default();
    let a = simulate_converter(&golden_design(), &s).unwrap();
    let b = simulate_converter(&golden_design(), &s).unwrap();
    assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("fixtures/converter_golden.json")).unwrap();
    let dc = golden["dc_gain_error"].as_f64().unwrap();
    let ripple = golden["voltage_ripple"].as_f64().unwrap();
    assert!((a[0] - dc).abs() <= 1e-9 * dc.abs(), "{} vs {dc}", a[0]);
    assert!((a[1] - ripple).abs() <= 1e-9 * ripple.abs(), "{} vs {ripple}", a[1]);
}

/// Regenerates `fixtures/converter_waveform.csv`, the input of
/// `fixtures/converter_oracle.py`.
#[test]
#[ignore]
fn write_converter_waveform() {
    let r = converter_waveform(&golden_design(), &ConverterSettings::default()).unwrap();
    let mut out = String::from("t,v_load\n");
    for (t, v) in r.times.iter().zip(&r.v_load) {
        out.push_str(&format!("{t:e},{v:e}\n"));
    }
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/converter_waveform.csv");
    std::fs::write(path, out).unwrap();
}
