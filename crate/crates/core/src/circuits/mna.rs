//! Fixed-step transient analysis by modified nodal analysis.
//!
//! Unknowns are the non-ground node voltages followed by one branch current
//! per voltage source and inductor. Reactive elements use companion models;
//! diodes are linearised and iterated with Newton's method and SPICE-style
//! junction voltage limiting.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use super::netlist::{ElementKind, Netlist, SwitchPhase};
use crate::linalg::DenseLu;
use crate::{Error, Result};

/// Thermal voltage at room temperature.
pub const THERMAL_VOLTAGE: f64 = 0.02585;
/// Conductance in parallel with every diode.
pub const GMIN: f64 = 1e-12;
pub const MAX_NEWTON_ITERATIONS: usize = 100;
/// Absolute Newton tolerance on node voltages.
pub const VOLTAGE_TOL: f64 = 1e-9;
const VOLTAGE_RELTOL: f64 = 1e-12;
/// Exponent beyond which the diode law continues linearly.
const EXP_LIMIT: f64 = 40.0;
/// Finest switching resolution accepted: grid points per period.
pub const MIN_STEPS_PER_PERIOD: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integration {
    #[default]
    BackwardEuler,
    Trapezoidal,
}

/// Time window and step. Integration always starts at `t = 0` from the
/// element initial conditions; only samples in `[t_start, t_end]` are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransientSettings {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub method: Integration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransientResult {
    pub times: Vec<f64>,
    /// `node_voltages[node][sample]`; row 0 is ground.
    pub node_voltages: Vec<Vec<f64>>,
    /// Branch currents of voltage sources and inductors, in netlist order.
    pub currents: Vec<(String, Vec<f64>)>,
    /// Terminal voltage of the netlist's load element (empty without one).
    pub v_load: Vec<f64>,
}

impl TransientResult {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn voltage(&self, pos: usize, neg: usize) -> Vec<f64> {
        self.node_voltages[pos].iter().zip(&self.node_voltages[neg]).map(|(a, b)| a - b).collect()
    }

    pub fn current(&self, name: &str) -> Option<&[f64]> {
        self.currents.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Shockley law with a linear continuation above `EXP_LIMIT`, plus gmin.
/// Returns current and conductance.
fn diode_law(v: f64, is: f64, nvt: f64) -> (f64, f64) {
    let a = v / nvt;
    let (i, g) = if a > EXP_LIMIT {
        let e = EXP_LIMIT.exp();
        (is * (e * (1.0 + a - EXP_LIMIT) - 1.0), is * e / nvt)
    } else {
        let e = a.exp();
        (is * (e - 1.0), is * e / nvt)
    };
    (i + GMIN * v, g + GMIN)
}

/// Junction voltage limiting (pnjlim). Returns the limited voltage and
/// whether limiting was applied.
fn limit_junction(vnew: f64, vold: f64, nvt: f64, vcrit: f64) -> (f64, bool) {
    if vnew > vcrit && (vnew - vold).abs() > 2.0 * nvt {
        if vold > 0.0 {
            let arg = 1.0 + (vnew - vold) / nvt;
            if arg > 0.0 {
                (vold + nvt * arg.ln(), true)
            } else {
                (vcrit, true)
            }
        } else {
            (nvt * (vnew / nvt).ln(), true)
        }
    } else {
        (vnew, false)
    }
}

struct Diode {
    pos: usize,
    neg: usize,
    is: f64,
    nvt: f64,
    vcrit: f64,
}

/// Reactive element state between steps.
#[derive(Clone, Copy)]
struct Reactive {
    /// Element index.
    elem: usize,
    /// Branch slot (inductors, and capacitors in the initial solve).
    branch: usize,
    v: f64,
    i: f64,
}

enum Mode {
    /// Capacitors pinned to their voltage, inductors to their current.
    Initial,
    Step { dt: f64 },
}

struct Engine<'a> {
    net: &'a Netlist,
    method: Integration,
    n_nodes: usize,
    /// Branch slot per voltage source (element index, slot).
    sources: Vec<(usize, usize)>,
    caps: Vec<Reactive>,
    inds: Vec<Reactive>,
    diodes: Vec<Diode>,
    switches: Vec<(usize, SwitchPhase)>,
    steps_per_period: usize,
}

impl<'a> Engine<'a> {
    fn new(net: &'a Netlist, method: Integration, steps_per_period: usize) -> Self {
        let n_nodes = net.nodes - 1;
        let mut slot = n_nodes;
        let (mut sources, mut caps, mut inds, mut diodes, mut switches) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (idx, e) in net.elements.iter().enumerate() {
            match e.kind {
                ElementKind::VoltageSource => {
                    sources.push((idx, slot));
                    slot += 1;
                }
                ElementKind::Inductor => {
                    inds.push(Reactive { elem: idx, branch: slot, v: 0.0, i: e.initial() });
                    slot += 1;
                }
                ElementKind::Capacitor => caps.push(Reactive { elem: idx, branch: 0, v: e.initial(), i: 0.0 }),
                ElementKind::Diode => {
                    let (is, n) = e.diode_parameters();
                    let nvt = n * THERMAL_VOLTAGE;
                    let vcrit = nvt * (nvt / (core::f64::consts::SQRT_2 * is)).ln();
                    diodes.push(Diode { pos: e.pos, neg: e.neg, is, nvt, vcrit });
                }
                ElementKind::Switch => {
                    let phase = net.schedule.as_ref().and_then(|s| s.phase(&e.name)).expect("validated netlist");
                    switches.push((idx, phase));
                }
                ElementKind::Resistor => {}
            }
        }
        // capacitor branch slots exist only in the initial system
        for c in caps.iter_mut() {
            c.branch = slot;
            slot += 1;
        }
        Self { net, method, n_nodes, sources, caps, inds, diodes, switches, steps_per_period }
    }

    fn size(&self, mode: &Mode) -> usize {
        let base = self.n_nodes + self.sources.len() + self.inds.len();
        match mode {
            Mode::Initial => base + self.caps.len(),
            Mode::Step { .. } => base,
        }
    }

    /// Matrix and right-hand side of everything except diodes.
    fn assemble_linear(&self, mode: &Mode, k: usize) -> (Vec<f64>, Vec<f64>) {
        let m = self.size(mode);
        let mut a = vec![0.0; m * m];
        let mut b = vec![0.0; m];
        let node = |n: usize| n.checked_sub(1);
        let conductance = |a: &mut Vec<f64>, p: usize, q: usize, g: f64| {
            if let Some(i) = node(p) {
                a[i * m + i] += g;
            }
            if let Some(j) = node(q) {
                a[j * m + j] += g;
            }
            if let (Some(i), Some(j)) = (node(p), node(q)) {
                a[i * m + j] -= g;
                a[j * m + i] -= g;
            }
        };
        // branch current `slot` leaves `p` and enters `q`; its equation row
        // starts with v_p − v_q
        let branch = |a: &mut Vec<f64>, p: usize, q: usize, slot: usize| {
            if let Some(i) = node(p) {
                a[i * m + slot] += 1.0;
                a[slot * m + i] += 1.0;
            }
            if let Some(j) = node(q) {
                a[j * m + slot] -= 1.0;
                a[slot * m + j] -= 1.0;
            }
        };
        let inject = |b: &mut Vec<f64>, p: usize, q: usize, i: f64| {
            // current source of value i flowing from p to q through the element
            if let Some(ip) = node(p) {
                b[ip] -= i;
            }
            if let Some(iq) = node(q) {
                b[iq] += i;
            }
        };

        for e in self.net.elements.iter().filter(|e| e.kind == ElementKind::Resistor) {
            conductance(&mut a, e.pos, e.neg, 1.0 / e.value());
        }
        let schedule = self.net.schedule.as_ref();
        for &(idx, phase) in &self.switches {
            let e = &self.net.elements[idx];
            let (r_on, r_off) = e.switch_resistances();
            let on = schedule.expect("validated netlist").is_on(phase, k, self.steps_per_period);
            conductance(&mut a, e.pos, e.neg, 1.0 / if on { r_on } else { r_off });
        }
        for &(idx, slot) in &self.sources {
            let e = &self.net.elements[idx];
            branch(&mut a, e.pos, e.neg, slot);
            b[slot] = e.value();
        }
        match *mode {
            Mode::Initial => {
                for c in &self.caps {
                    let e = &self.net.elements[c.elem];
                    branch(&mut a, e.pos, e.neg, c.branch);
                    b[c.branch] = c.v;
                }
                for l in &self.inds {
                    let e = &self.net.elements[l.elem];
                    // KCL coupling only; the branch row pins the current
                    if let Some(i) = node(e.pos) {
                        a[i * m + l.branch] += 1.0;
                    }
                    if let Some(j) = node(e.neg) {
                        a[j * m + l.branch] -= 1.0;
                    }
                    a[l.branch * m + l.branch] = 1.0;
                    b[l.branch] = l.i;
                }
            }
            Mode::Step { dt } => {
                let trap = self.method == Integration::Trapezoidal;
                for c in &self.caps {
                    let e = &self.net.elements[c.elem];
                    let g = if trap { 2.0 } else { 1.0 } * e.value() / dt;
                    let ieq = g * c.v + if trap { c.i } else { 0.0 };
                    conductance(&mut a, e.pos, e.neg, g);
                    inject(&mut b, e.pos, e.neg, -ieq);
                }
                for l in &self.inds {
                    let e = &self.net.elements[l.elem];
                    let z = if trap { 2.0 } else { 1.0 } * e.value() / dt;
                    branch(&mut a, e.pos, e.neg, l.branch);
                    a[l.branch * m + l.branch] -= z;
                    b[l.branch] = -z * l.i - if trap { l.v } else { 0.0 };
                }
            }
        }
        (a, b)
    }

    fn node_voltage(x: &[f64], n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            x[n - 1]
        }
    }

    /// Solves one time point. `x` holds the previous solution on entry (the
    /// Newton starting point) and the new one on exit.
    fn solve_point(&self, mode: &Mode, k: usize, time: f64, x: &mut Vec<f64>) -> Result<()> {
        let m = self.size(mode);
        let (a0, b0) = self.assemble_linear(mode, k);
        let singular = |msg: String| {
            Error::Singular(format!(
                "MNA matrix at t = {time:e} s ({msg}); look for a loop of voltage sources or inductors, \
                 or a node held only by capacitors or current paths"
            ))
        };
        if self.diodes.is_empty() {
            let lu = DenseLu::factor(a0, m).map_err(|e| singular(format!("{e}")))?;
            *x = lu.solve(&b0);
            return Ok(());
        }
        x.resize(m, 0.0);
        let mut vd: Vec<f64> = self
            .diodes
            .iter()
            .map(|d| Self::node_voltage(x, d.pos) - Self::node_voltage(x, d.neg))
            .collect();
        let mut prev = x.clone();
        for iter in 1..=MAX_NEWTON_ITERATIONS {
            let (mut a, mut b) = (a0.clone(), b0.clone());
            for (d, &v) in self.diodes.iter().zip(&vd) {
                let (i, g) = diode_law(v, d.is, d.nvt);
                let ieq = i - g * v;
                let (p, q) = (d.pos.checked_sub(1), d.neg.checked_sub(1));
                if let Some(p) = p {
                    a[p * m + p] += g;
                    b[p] -= ieq;
                }
                if let Some(q) = q {
                    a[q * m + q] += g;
                    b[q] += ieq;
                }
                if let (Some(p), Some(q)) = (p, q) {
                    a[p * m + q] -= g;
                    a[q * m + p] -= g;
                }
            }
            let lu = DenseLu::factor(a, m).map_err(|e| singular(format!("{e}")))?;
            let xn = lu.solve(&b);
            if xn.iter().any(|v| !v.is_finite()) {
                return Err(Error::Newton { time, iterations: iter });
            }
            let mut limited = false;
            for (d, v) in self.diodes.iter().zip(vd.iter_mut()) {
                let raw = Self::node_voltage(&xn, d.pos) - Self::node_voltage(&xn, d.neg);
                let (lim, hit) = limit_junction(raw, *v, d.nvt, d.vcrit);
                limited |= hit;
                *v = lim;
            }
            let settled = xn[..self.n_nodes]
                .iter()
                .zip(&prev[..self.n_nodes])
                .all(|(a, b)| (a - b).abs() < VOLTAGE_TOL + VOLTAGE_RELTOL * a.abs().max(b.abs()));
            prev = xn;
            if iter > 1 && settled && !limited {
                *x = prev;
                return Ok(());
            }
        }
        Err(Error::Newton { time, iterations: MAX_NEWTON_ITERATIONS })
    }

    /// Updates reactive states from an accepted solution.
    fn accept(&mut self, mode: &Mode, x: &[f64]) {
        let v_of = |e: usize, net: &Netlist| {
            let el = &net.elements[e];
            Self::node_voltage(x, el.pos) - Self::node_voltage(x, el.neg)
        };
        let trap = self.method == Integration::Trapezoidal;
        for c in self.caps.iter_mut() {
            let v = v_of(c.elem, self.net);
            c.i = match *mode {
                Mode::Initial => x[c.branch],
                Mode::Step { dt } => {
                    let cap = self.net.elements[c.elem].value();
                    if trap {
                        2.0 * cap / dt * (v - c.v) - c.i
                    } else {
                        cap / dt * (v - c.v)
                    }
                }
            };
            c.v = v;
        }
        for l in self.inds.iter_mut() {
            l.v = v_of(l.elem, self.net);
            l.i = x[l.branch];
        }
    }
}

/// Snapped grid index of time `t`.
fn grid_index(t: f64, dt: f64) -> usize {
    (t / dt).round() as usize
}

/// Integrates `net` from its initial conditions and samples the window.
pub fn transient(net: &Netlist, settings: &TransientSettings) -> Result<TransientResult> {
    net.validate()?;
    let TransientSettings { t_start, t_end, dt, method } = *settings;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("time step must be positive"));
    }
    if !(t_start >= 0.0 && t_end > t_start && t_end.is_finite()) {
        return Err(Error::invalid(format!("invalid window [{t_start:e}, {t_end:e}]")));
    }
    if net.nodes < 2 {
        return Err(Error::invalid("netlist has no nodes besides ground"));
    }
    let steps_per_period = match &net.schedule {
        Some(s) if net.count(ElementKind::Switch) > 0 => {
            let spp = grid_index(s.period, dt);
            if spp < MIN_STEPS_PER_PERIOD {
                return Err(Error::invalid(format!(
                    "time step {dt:e} s too coarse for switching period {:e} s (need dt ≤ period/{MIN_STEPS_PER_PERIOD})",
                    s.period
                )));
            }
            spp
        }
        _ => 1,
    };
    let n_steps = grid_index(t_end, dt);
    let k_start = grid_index(t_start, dt);

    let mut engine = Engine::new(net, method, steps_per_period);
    let mut x = vec![0.0; engine.size(&Mode::Initial)];
    engine.solve_point(&Mode::Initial, 0, 0.0, &mut x)?;
    engine.accept(&Mode::Initial, &x);
    x.truncate(engine.size(&Mode::Step { dt }));

    let n_samples = n_steps - k_start + 1;
    let mut times = Vec::with_capacity(n_samples);
    let mut node_voltages = vec![Vec::with_capacity(n_samples); net.nodes];
    let mut currents: Vec<(String, Vec<f64>)> = net
        .elements
        .iter()
        .filter(|e| matches!(e.kind, ElementKind::VoltageSource | ElementKind::Inductor))
        .map(|e| (e.name.clone(), Vec::with_capacity(n_samples)))
        .collect();
    let branch_slots: Vec<usize> = {
        let mut slots = Vec::new();
        let (mut si, mut li) = (0, 0);
        for e in &net.elements {
            match e.kind {
                ElementKind::VoltageSource => {
                    slots.push(engine.sources[si].1);
                    si += 1;
                }
                ElementKind::Inductor => {
                    slots.push(engine.inds[li].branch);
                    li += 1;
                }
                _ => {}
            }
        }
        slots
    };
    let mut record = |k: usize, x: &[f64]| {
        times.push(if k == k_start {
            t_start
        } else if k == n_steps {
            t_end
        } else {
            k as f64 * dt
        });
        node_voltages[0].push(0.0);
        for n in 1..net.nodes {
            node_voltages[n].push(x[n - 1]);
        }
        for ((_, w), &s) in currents.iter_mut().zip(&branch_slots) {
            w.push(x[s]);
        }
    };
    if k_start == 0 {
        record(0, &x);
    }
    let mode = Mode::Step { dt };
    for k in 1..=n_steps {
        // the interval (t_{k-1}, t_k] uses the switch states at t_{k-1}
        engine.solve_point(&mode, k - 1, k as f64 * dt, &mut x)?;
        engine.accept(&mode, &x);
        if k >= k_start {
            record(k, &x);
        }
    }
    let v_load = match net.load.as_deref().and_then(|l| net.element(l)) {
        Some(e) => node_voltages[e.pos].iter().zip(&node_voltages[e.neg]).map(|(a, b)| a - b).collect(),
        None => Vec::new(),
    };
    Ok(TransientResult { times, node_voltages, currents, v_load })
}
