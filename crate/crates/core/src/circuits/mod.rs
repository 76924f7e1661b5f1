//! Transient circuit simulation and the PowerElectronics problem.

mod converter;
mod mna;
mod netlist;
mod objectives;

pub use converter::{
    converter_netlist, converter_objectives, converter_waveform, simulate_converter, ConverterDesign,
    ConverterSettings, PowerElectronics, CAPACITANCE_RANGE, DESIGN_NAMES, DUTY_RANGE, INDUCTANCE_RANGE,
    SWITCH_PHASES,
};
pub use mna::{
    transient, Integration, TransientResult, TransientSettings, GMIN, MAX_NEWTON_ITERATIONS, MIN_STEPS_PER_PERIOD,
    THERMAL_VOLTAGE, VOLTAGE_TOL,
};
pub use netlist::{
    Element, ElementKind, Netlist, SwitchPhase, SwitchSchedule, DIODE_IS, DIODE_N, SWITCH_R_OFF, SWITCH_R_ON,
};
pub use objectives::{dc_gain, time_average, voltage_ripple};
