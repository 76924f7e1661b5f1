use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use crate::{Error, Result};

pub const SWITCH_R_ON: f64 = 1e-3;
pub const SWITCH_R_OFF: f64 = 1e9;
pub const DIODE_IS: f64 = 1e-12;
pub const DIODE_N: f64 = 2.0;

/// Element kinds, with their netlist letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Resistor,
    Inductor,
    Capacitor,
    VoltageSource,
    Switch,
    Diode,
}

impl ElementKind {
    pub fn letter(self) -> &'static str {
        match self {
            ElementKind::Resistor => "R",
            ElementKind::Inductor => "L",
            ElementKind::Capacitor => "C",
            ElementKind::VoltageSource => "V",
            ElementKind::Switch => "S",
            ElementKind::Diode => "D",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        Some(match s {
            "R" => ElementKind::Resistor,
            "L" => ElementKind::Inductor,
            "C" => ElementKind::Capacitor,
            "V" => ElementKind::VoltageSource,
            "S" => ElementKind::Switch,
            "D" => ElementKind::Diode,
            _ => return None,
        })
    }

    /// Accepted value counts: `(required, total)`. Optional trailing values
    /// are initial conditions (C: voltage, L: current) or model parameters
    /// (S: R_on R_off, D: I_s n).
    fn arity(self) -> (usize, usize) {
        match self {
            ElementKind::Resistor | ElementKind::VoltageSource => (1, 1),
            ElementKind::Inductor | ElementKind::Capacitor => (1, 2),
            ElementKind::Switch | ElementKind::Diode => (0, 2),
        }
    }
}

/// A two-terminal element between `pos` and `neg`. Diodes conduct from
/// `pos` (anode) to `neg` (cathode); sources raise `pos` above `neg`.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub name: String,
    pub pos: usize,
    pub neg: usize,
    pub values: Vec<f64>,
}

impl Element {
    pub fn new(kind: ElementKind, name: &str, pos: usize, neg: usize, values: &[f64]) -> Self {
        Self { kind, name: name.to_string(), pos, neg, values: values.to_vec() }
    }

    /// Primary value: R, L, C or V. Not meaningful for switches and diodes.
    pub fn value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Initial capacitor voltage or inductor current.
    pub fn initial(&self) -> f64 {
        self.values.get(1).copied().unwrap_or(0.0)
    }

    pub fn switch_resistances(&self) -> (f64, f64) {
        (self.values.first().copied().unwrap_or(SWITCH_R_ON), self.values.get(1).copied().unwrap_or(SWITCH_R_OFF))
    }

    pub fn diode_parameters(&self) -> (f64, f64) {
        (self.values.first().copied().unwrap_or(DIODE_IS), self.values.get(1).copied().unwrap_or(DIODE_N))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchPhase {
    /// Conducts for the first `duty` fraction of every period.
    Primary,
    /// Conducts for the remaining `1 − duty`.
    Complement,
}

/// Periodic gating shared by all switches; every switch toggles at the
/// same instants.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchSchedule {
    pub period: f64,
    pub duty: f64,
    pub phases: Vec<(String, SwitchPhase)>,
}

impl SwitchSchedule {
    pub fn new(period: f64, duty: f64) -> Self {
        Self { period, duty, phases: Vec::new() }
    }

    pub fn with(mut self, switch: &str, phase: SwitchPhase) -> Self {
        self.phases.push((switch.to_string(), phase));
        self
    }

    pub fn phase(&self, switch: &str) -> Option<SwitchPhase> {
        self.phases.iter().find(|(n, _)| n == switch).map(|(_, p)| *p)
    }

    /// Conduction of a switch with `phase` at grid index `k`, with
    /// `steps_per_period` grid points per period.
    pub fn is_on(&self, phase: SwitchPhase, k: usize, steps_per_period: usize) -> bool {
        let on_steps = (self.duty * steps_per_period as f64).round() as usize;
        let primary = k % steps_per_period < on_steps;
        match phase {
            SwitchPhase::Primary => primary,
            SwitchPhase::Complement => !primary,
        }
    }
}

/// Circuit description. Node 0 is ground; nodes are numbered `0..nodes`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Netlist {
    pub nodes: usize,
    pub elements: Vec<Element>,
    /// Element whose terminal voltage is reported as the load voltage.
    pub load: Option<String>,
    pub schedule: Option<SwitchSchedule>,
}

impl Netlist {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an element, growing the node count as needed.
    pub fn add(&mut self, kind: ElementKind, name: &str, pos: usize, neg: usize, values: &[f64]) -> &mut Self {
        self.nodes = self.nodes.max(pos + 1).max(neg + 1);
        self.elements.push(Element::new(kind, name, pos, neg, values));
        self
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.name == name)
    }

    pub fn element_mut(&mut self, name: &str) -> Option<&mut Element> {
        self.elements.iter_mut().find(|e| e.name == name)
    }

    pub fn count(&self, kind: ElementKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }

    /// Checks names, values, node indices, schedule coverage and that every
    /// node is connected to ground.
    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for e in &self.elements {
            if e.name.is_empty() || e.name.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!("invalid element name `{}`", e.name)));
            }
            if !names.insert(e.name.as_str()) {
                return Err(Error::invalid(format!("duplicate element name `{}`", e.name)));
            }
            if e.pos >= self.nodes || e.neg >= self.nodes {
                return Err(Error::invalid(format!("element `{}` references a node outside 0..{}", e.name, self.nodes)));
            }
            if e.pos == e.neg {
                return Err(Error::invalid(format!("element `{}` is shorted (both terminals on node {})", e.name, e.pos)));
            }
            let (req, total) = e.kind.arity();
            if e.values.len() < req || e.values.len() > total {
                return Err(Error::invalid(format!(
                    "element `{}` takes {} value(s), got {}",
                    e.name,
                    if req == total { format!("{req}") } else { format!("{req} to {total}") },
                    e.values.len()
                )));
            }
            if e.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("element `{}` has a non-finite value", e.name)));
            }
            let positive = match e.kind {
                ElementKind::Resistor | ElementKind::Inductor | ElementKind::Capacitor => 1,
                ElementKind::Switch | ElementKind::Diode => e.values.len(),
                ElementKind::VoltageSource => 0,
            };
            if e.values[..positive].iter().any(|&v| v <= 0.0) {
                return Err(Error::invalid(format!("element `{}` needs positive parameters", e.name)));
            }
        }
        if let Some(load) = &self.load {
            if self.element(load).is_none() {
                return Err(Error::invalid(format!("load element `{load}` does not exist")));
            }
        }
        let switches: Vec<&Element> = self.elements.iter().filter(|e| e.kind == ElementKind::Switch).collect();
        match &self.schedule {
            Some(s) => {
                if !(s.period > 0.0 && s.period.is_finite()) {
                    return Err(Error::invalid("switching period must be positive"));
                }
                if !(0.0..=1.0).contains(&s.duty) {
                    return Err(Error::invalid("duty cycle must lie in [0, 1]"));
                }
                for (name, _) in &s.phases {
                    if !switches.iter().any(|e| &e.name == name) {
                        return Err(Error::invalid(format!("schedule names `{name}`, which is not a switch")));
                    }
                }
                for e in &switches {
                    if s.phase(&e.name).is_none() {
                        return Err(Error::invalid(format!("switch `{}` has no phase in the schedule", e.name)));
                    }
                }
            }
            None if !switches.is_empty() => {
                return Err(Error::invalid("switches present but no schedule given"));
            }
            None => {}
        }
        self.check_connected()
    }

    fn check_connected(&self) -> Result<()> {
        let mut parent: Vec<usize> = (0..self.nodes).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for e in &self.elements {
            let (a, b) = (find(&mut parent, e.pos), find(&mut parent, e.neg));
            parent[a] = b;
        }
        let ground = find(&mut parent, 0);
        let floating: Vec<usize> = (1..self.nodes).filter(|&n| find(&mut parent, n) != ground).collect();
        if floating.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(format!("nodes {floating:?} have no path to ground")))
        }
    }

    /// Node indices with at least one element attached, plus ground.
    pub fn used_nodes(&self) -> Vec<bool> {
        let mut used = vec![false; self.nodes];
        if self.nodes > 0 {
            used[0] = true;
        }
        for e in &self.elements {
            used[e.pos] = true;
            used[e.neg] = true;
        }
        used
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc() -> Netlist {
        let mut n = Netlist::new();
        n.add(ElementKind::VoltageSource, "V1", 1, 0, &[1.0])
            .add(ElementKind::Resistor, "R1", 1, 2, &[1e3])
            .add(ElementKind::Capacitor, "C1", 2, 0, &[1e-6]);
        n
    }

    #[test]
    fn valid_rc_passes() {
        assert!(rc().validate().is_ok());
        assert_eq!(rc().nodes, 3);
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut n = rc();
        n.add(ElementKind::Resistor, "R1", 2, 0, &[1.0]);
        assert!(n.validate().unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn floating_node_rejected() {
        let mut n = rc();
        n.add(ElementKind::Resistor, "R9", 3, 4, &[1.0]);
        assert!(n.validate().unwrap_err().to_string().contains("[3, 4]"));
    }

    #[test]
    fn switches_need_a_schedule_entry() {
        let mut n = rc();
        n.add(ElementKind::Switch, "S1", 2, 0, &[]);
        assert!(n.validate().is_err());
        n.schedule = Some(SwitchSchedule::new(1e-6, 0.5));
        assert!(n.validate().is_err());
        n.schedule = Some(SwitchSchedule::new(1e-6, 0.5).with("S1", SwitchPhase::Primary));
        assert!(n.validate().is_ok());
    }

    #[test]
    fn duty_gating_on_the_grid() {
        let s = SwitchSchedule::new(1.0, 0.3);
        let on: Vec<bool> = (0..10).map(|k| s.is_on(SwitchPhase::Primary, k, 10)).collect();
        assert_eq!(on.iter().filter(|&&b| b).count(), 3);
        assert!(on[0] && on[2] && !on[3]);
        assert!((0..10).all(|k| s.is_on(SwitchPhase::Complement, k, 10) != on[k]));
    }
}
