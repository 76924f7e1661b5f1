//! Reference switched DC-DC converter and the PowerElectronics problem.
//!
//! Three cascaded buck stages followed by a blocking diode and an RC output
//! filter: 5 switches, 4 diodes, 3 inductors, 6 capacitors.
//!
//! ```text
//! V1 ─ Rs ─ n2 ─ S1 ─ n3 ─ L1 ─ n4 ─ S3 ─ n5 ─ L2 ─ n6 ─ S4 ─ n7 ─ L3 ─ n8 ─ D4 ─ n9 ─ Rf ─ n10
//!           │         │S2,D1     │         │D2        │         │S5,D3     │          │         │
//!           C1        ┴          C2        ┴          C3        ┴          C4         C5        C6 ∥ RL
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::any::Any;

use super::{dc_gain, transient, voltage_ripple, ElementKind, Integration, Netlist, SwitchPhase, SwitchSchedule,
    TransientResult, TransientSettings};
use crate::problem::{
    Conditions, ConstraintRow, Design, DesignKind, DesignSpace, Direction, Interval, OptHistory, Problem,
    ProblemSpec, Quantity, SeedState,
};
use crate::{Error, Result};

pub const CAPACITANCE_RANGE: (f64, f64) = (1e-6, 2e-5);
pub const INDUCTANCE_RANGE: (f64, f64) = (1e-6, 1e-3);
pub const DUTY_RANGE: (f64, f64) = (0.1, 0.9);

/// Names of the design entries, in vector order.
pub const DESIGN_NAMES: [&str; 10] = ["C1", "C2", "C3", "C4", "C5", "C6", "L1", "L2", "L3", "T1"];

/// Switch names with their gating; at `t = 0` this gives
/// on, off, on, on, off.
pub const SWITCH_PHASES: [(&str, SwitchPhase); 5] = [
    ("S1", SwitchPhase::Primary),
    ("S2", SwitchPhase::Complement),
    ("S3", SwitchPhase::Primary),
    ("S4", SwitchPhase::Primary),
    ("S5", SwitchPhase::Complement),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterDesign {
    pub capacitances: [f64; 6],
    pub inductances: [f64; 3],
    pub duty: f64,
}

impl ConverterDesign {
    pub fn from_slice(x: &[f64]) -> Result<Self> {
        if x.len() != 10 {
            return Err(Error::invalid(format!("converter design has 10 entries, got {}", x.len())));
        }
        let mut capacitances = [0.0; 6];
        capacitances.copy_from_slice(&x[..6]);
        let mut inductances = [0.0; 3];
        inductances.copy_from_slice(&x[6..9]);
        Ok(Self { capacitances, inductances, duty: x[9] })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.capacitances.to_vec();
        v.extend_from_slice(&self.inductances);
        v.push(self.duty);
        v
    }
}

/// Operating point and numerics of the reference converter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterSettings {
    pub v_source: f64,
    pub source_resistance: f64,
    pub filter_resistance: f64,
    pub load_resistance: f64,
    pub period: f64,
    pub steps_per_period: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub method: Integration,
    /// DC gain the first objective measures distance to.
    pub target_gain: f64,
}

impl Default for ConverterSettings {
    fn default() -> Self {
        Self {
            v_source: 1000.0,
            source_resistance: 0.1,
            filter_resistance: 0.05,
            load_resistance: 10.0,
            period: 1e-6,
            steps_per_period: 200,
            t_start: 1.0e-3,
            t_end: 1.06e-3,
            method: Integration::BackwardEuler,
            target_gain: 0.25,
        }
    }
}

impl ConverterSettings {
    pub fn dt(&self) -> f64 {
        self.period / self.steps_per_period as f64
    }

    pub fn transient(&self) -> TransientSettings {
        TransientSettings { t_start: self.t_start, t_end: self.t_end, dt: self.dt(), method: self.method }
    }
}

/// The reference netlist instantiated with `design`.
pub fn converter_netlist(design: &ConverterDesign, s: &ConverterSettings) -> Netlist {
    use ElementKind::*;
    let [c1, c2, c3, c4, c5, c6] = design.capacitances;
    let [l1, l2, l3] = design.inductances;
    let mut n = Netlist::new();
    n.add(VoltageSource, "V1", 1, 0, &[s.v_source])
        .add(Resistor, "Rs", 1, 2, &[s.source_resistance])
        .add(Capacitor, "C1", 2, 0, &[c1])
        .add(Switch, "S1", 2, 3, &[])
        .add(Switch, "S2", 3, 0, &[])
        .add(Diode, "D1", 0, 3, &[])
        .add(Inductor, "L1", 3, 4, &[l1])
        .add(Capacitor, "C2", 4, 0, &[c2])
        .add(Switch, "S3", 4, 5, &[])
        .add(Diode, "D2", 0, 5, &[])
        .add(Inductor, "L2", 5, 6, &[l2])
        .add(Capacitor, "C3", 6, 0, &[c3])
        .add(Switch, "S4", 6, 7, &[])
        .add(Switch, "S5", 7, 0, &[])
        .add(Diode, "D3", 0, 7, &[])
        .add(Inductor, "L3", 7, 8, &[l3])
        .add(Capacitor, "C4", 8, 0, &[c4])
        .add(Diode, "D4", 8, 9, &[])
        .add(Capacitor, "C5", 9, 0, &[c5])
        .add(Resistor, "Rf", 9, 10, &[s.filter_resistance])
        .add(Capacitor, "C6", 10, 0, &[c6])
        .add(Resistor, "RL", 10, 0, &[s.load_resistance]);
    n.load = Some("RL".to_string());
    let mut schedule = SwitchSchedule::new(s.period, design.duty);
    for (name, phase) in SWITCH_PHASES {
        schedule = schedule.with(name, phase);
    }
    n.schedule = Some(schedule);
    n
}

/// Load waveform of `design` over the analysis window.
pub fn converter_waveform(design: &ConverterDesign, s: &ConverterSettings) -> Result<TransientResult> {
    transient(&converter_netlist(design, s), &s.transient())
}

/// `(|DcGain − target|, VoltageRipple)` of a waveform.
pub fn converter_objectives(result: &TransientResult, s: &ConverterSettings) -> Result<[f64; 2]> {
    Ok([(dc_gain(result, s.v_source)? - s.target_gain).abs(), voltage_ripple(result)?])
}

pub fn simulate_converter(design: &ConverterDesign, s: &ConverterSettings) -> Result<[f64; 2]> {
    let r = converter_waveform(design, s).map_err(|e| match e {
        Error::InvalidInput(_) => e,
        other => Error::Simulation(format!("{other}")),
    })?;
    converter_objectives(&r, s)
}

/// Parameter tuning of the reference converter; two objectives, no
/// conditions, no built-in optimizer.
#[derive(Debug, Clone)]
pub struct PowerElectronics {
    spec: ProblemSpec,
    seed: SeedState,
    pub settings: ConverterSettings,
}

impl Default for PowerElectronics {
    fn default() -> Self {
        Self::new(ConverterSettings::default())
    }
}

impl PowerElectronics {
    pub fn new(settings: ConverterSettings) -> Self {
        let mut lower = vec![CAPACITANCE_RANGE.0; 6];
        let mut upper = vec![CAPACITANCE_RANGE.1; 6];
        lower.extend([INDUCTANCE_RANGE.0; 3]);
        upper.extend([INDUCTANCE_RANGE.1; 3]);
        lower.push(DUTY_RANGE.0);
        upper.push(DUTY_RANGE.1);
        let space = DesignSpace::new(lower, upper, vec![10], DesignKind::Mixed).expect("static bounds");
        let spec = ProblemSpec::new("powerelectronics", 0, space)
            .objective("DcGain", Direction::Minimize)
            .objective("Voltage_Ripple", Direction::Minimize);
        Self { spec, seed: SeedState::default(), settings }
    }
}

impl Problem for PowerElectronics {
    fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    fn design_names(&self) -> Vec<String> {
        DESIGN_NAMES.iter().map(|n| n.to_string()).collect()
    }

    fn constraint_rows(&self, _conds: &Conditions) -> Vec<ConstraintRow> {
        DESIGN_NAMES
            .iter()
            .enumerate()
            .map(|(index, name)| {
                let (lo, hi) = match index {
                    0..=5 => CAPACITANCE_RANGE,
                    6..=8 => INDUCTANCE_RANGE,
                    _ => DUTY_RANGE,
                };
                ConstraintRow::theory_error(
                    Quantity::DesignEntry { index, name: String::from(*name) },
                    Interval::closed(lo, hi),
                )
            })
            .collect()
    }

    fn evaluate(&mut self, design: &Design, _conds: &Conditions) -> Result<Vec<f64>> {
        let d = ConverterDesign::from_slice(design.values())?;
        Ok(simulate_converter(&d, &self.settings)?.to_vec())
    }

    fn run_optimizer(&mut self, _start: &Design, _conds: &Conditions) -> Result<(Design, OptHistory)> {
        Err(Error::Unsupported(
            "powerelectronics/v0 has no gradient-based optimizer; use the NSGA-II driver".to_string(),
        ))
    }

    fn seed_state(&mut self) -> &mut SeedState {
        &mut self.seed
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
