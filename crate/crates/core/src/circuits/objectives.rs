use super::TransientResult;
use crate::math::exact_sum;
use crate::{Error, Result};

/// Mean of `values` over `times` by the trapezoidal rule. The integral is
/// taken about the first sample, so constant waveforms return their value
/// exactly.
pub fn time_average(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::invalid("time and value series differ in length"));
    }
    let (Some(first), Some(last)) = (times.first(), times.last()) else {
        return Err(Error::invalid("empty waveform"));
    };
    let span = last - first;
    if !(span > 0.0) {
        return Err(Error::invalid("zero-length averaging window"));
    }
    let base = values[0];
    let integral = exact_sum(
        times
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| 0.5 * ((v[0] - base) + (v[1] - base)) * (t[1] - t[0])),
    );
    Ok(base + integral / span)
}

/// Time-averaged load voltage over the source voltage.
pub fn dc_gain(result: &TransientResult, v_source: f64) -> Result<f64> {
    if v_source == 0.0 {
        return Err(Error::invalid("source voltage is zero"));
    }
    Ok(time_average(&result.times, &result.v_load)? / v_source)
}

/// Peak-to-peak load voltage over its time average.
pub fn voltage_ripple(result: &TransientResult) -> Result<f64> {
    let mean = time_average(&result.times, &result.v_load)?;
    if mean.abs() < 1e-12 {
        return Err(Error::Simulation("degenerate load waveform: mean voltage is zero".into()));
    }
    let (lo, hi) = result.v_load.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    Ok((hi - lo) / mean)
}
