use std::f64::consts::PI;

use num_complex::Complex;

use super::LoraParams;
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::{cis, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChirpDirection {
    Up,
    Down,
}

pub(crate) fn check_rate(params: &LoraParams, fs: f64) -> Result<()> {
    params.validate()?;
    if !(fs.is_finite() && fs >= params.bw) {
        return Err(Error::InvalidSampleRate(format!(
            "fs = {fs} Hz is below the {} Hz LoRa bandwidth",
            params.bw
        )));
    }
    Ok(())
}

/// Chirp sample at `tau` seconds into a symbol carrying `value`.
///
/// The instantaneous frequency of an up-chirp starts at `-bw/2 + value·bw/2^sf`
/// and wraps from `+bw/2` back to `-bw/2`; that is the base chirp advanced
/// cyclically by `value/2^sf` of a period. With `u` the fractional position
/// in the period the phase is `π·2^sf·u·(u - 1)`, which vanishes at the
/// start of the base chirp.
pub(crate) fn symbol_sample<T: Real>(tau: f64, value: u32, dir: ChirpDirection, params: &LoraParams) -> Complex<T> {
    let m = f64::from(params.chips_per_symbol());
    let u = tau / params.symbol_duration() + f64::from(value) / m;
    let u = u - u.floor();
    let phase = PI * m * u * (u - 1.0);
    match dir {
        ChirpDirection::Up => cis(phase),
        ChirpDirection::Down => cis(-phase),
    }
}

fn render<T: Real>(value: u32, dir: ChirpDirection, params: &LoraParams, fs: f64) -> IqBuffer<T> {
    let n = params.samples_per_symbol(fs).round() as usize;
    let samples = (0..n)
        .map(|i| symbol_sample(i as f64 / fs, value, dir, params))
        .collect();
    IqBuffer::from_parts(samples, fs)
}

/// One unmodulated chirp of `round(T·fs)` unit-magnitude samples.
pub fn base_chirp<T: Real>(params: &LoraParams, fs: f64, dir: ChirpDirection) -> Result<IqBuffer<T>> {
    check_rate(params, fs)?;
    Ok(render(0, dir, params, fs))
}

/// Up-chirp carrying symbol `value` as a cyclic time shift.
pub fn modulate_symbol<T: Real>(value: u32, params: &LoraParams, fs: f64) -> Result<IqBuffer<T>> {
    check_rate(params, fs)?;
    if value >= params.chips_per_symbol() {
        return Err(Error::Domain(format!(
            "symbol {value} out of range for SF{}",
            params.sf
        )));
    }
    Ok(render(value, ChirpDirection::Up, params, fs))
}
