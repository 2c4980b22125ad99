use num_complex::Complex;

use super::chirp::{check_rate, symbol_sample, ChirpDirection};
use super::{encode_payload, LoraParams};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// A LoRa frame in implicit header mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LoraFrame {
    params: LoraParams,
    payload: Vec<u8>,
}

impl LoraFrame {
    pub fn new(params: LoraParams, payload: Vec<u8>) -> Result<Self> {
        params.validate()?;
        if payload.len() != params.payload_len {
            return Err(Error::LengthMismatch {
                expected: params.payload_len,
                actual: payload.len(),
            });
        }
        Ok(Self { params, payload })
    }

    pub fn params(&self) -> &LoraParams {
        &self.params
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }
}

/// Sample positions of the frame sections at a given sample rate.
///
/// Section boundaries sit at `round(k·T·fs)` for a boundary `k` symbol
/// periods into the frame, so rounding never accumulates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameLayout {
    samples_per_symbol: f64,
    preamble_len: usize,
    payload_symbols: usize,
}

impl FrameLayout {
    pub fn new(params: &LoraParams, fs: f64) -> Self {
        Self {
            samples_per_symbol: params.samples_per_symbol(fs),
            preamble_len: params.preamble_len,
            payload_symbols: params.payload_symbol_count(),
        }
    }

    pub fn samples_per_symbol(&self) -> f64 {
        self.samples_per_symbol
    }

    /// Sample index of a position `symbols` periods into the frame.
    pub fn boundary(&self, symbols: f64) -> usize {
        (symbols * self.samples_per_symbol).round() as usize
    }

    pub fn sync_start(&self) -> usize {
        self.boundary(self.preamble_len as f64)
    }

    pub fn downchirp_start(&self) -> usize {
        self.boundary(self.preamble_len as f64 + 2.0)
    }

    pub fn silence_start(&self) -> usize {
        self.boundary(self.preamble_len as f64 + 4.0)
    }

    pub fn payload_start(&self) -> usize {
        self.payload_symbol_start(0)
    }

    pub fn payload_symbol_start(&self, i: usize) -> usize {
        self.boundary(self.payload_offset_symbols() + i as f64)
    }

    pub fn payload_offset_symbols(&self) -> f64 {
        self.preamble_len as f64 + 4.25
    }

    pub fn payload_symbols(&self) -> usize {
        self.payload_symbols
    }

    pub fn total_len(&self) -> usize {
        self.payload_symbol_start(self.payload_symbols)
    }
}

/// Renders one symbol occupying `start_symbols..start_symbols + 1` periods.
fn push_symbol<T: Real>(
    out: &mut Vec<Complex<T>>,
    layout: &FrameLayout,
    start_symbols: f64,
    value: u32,
    dir: ChirpDirection,
    params: &LoraParams,
    fs: f64,
) {
    let origin = start_symbols * layout.samples_per_symbol;
    let end = layout.boundary(start_symbols + 1.0);
    debug_assert_eq!(out.len(), layout.boundary(start_symbols));
    for n in out.len()..end {
        let tau = (n as f64 - origin) / fs;
        out.push(symbol_sample(tau, value, dir, params));
    }
}

/// Baseband waveform of a complete frame: preamble upchirps, two sync-word
/// symbols, two downchirps, a quarter-symbol of silence, payload symbols.
pub fn build_frame_waveform<T: Real>(frame: &LoraFrame, fs: f64) -> Result<IqBuffer<T>> {
    let params = frame.params();
    check_rate(params, fs)?;
    let symbols = encode_payload(frame.payload(), params)?;
    let layout = FrameLayout::new(params, fs);
    let mut out = Vec::with_capacity(layout.total_len());

    let mut at = 0.0;
    let push = |out: &mut Vec<Complex<T>>, at: &mut f64, value, dir| {
        push_symbol(out, &layout, *at, value, dir, params, fs);
        *at += 1.0;
    };
    for _ in 0..params.preamble_len {
        push(&mut out, &mut at, 0, ChirpDirection::Up);
    }
    for &v in &params.sync_word {
        push(&mut out, &mut at, v, ChirpDirection::Up);
    }
    for _ in 0..2 {
        push(&mut out, &mut at, 0, ChirpDirection::Down);
    }
    out.resize(layout.payload_start(), Complex::new(T::zero(), T::zero()));
    at += 0.25;
    for &v in &symbols {
        push(&mut out, &mut at, v, ChirpDirection::Up);
    }
    debug_assert_eq!(out.len(), layout.total_len());
    Ok(IqBuffer::from_parts(out, fs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lora::{base_chirp, modulate_symbol};

    fn frame(sf: u8, bw: f64, cr: u8, payload: &[u8]) -> LoraFrame {
        let p = LoraParams::new(sf, bw, cr)
            .unwrap()
            .with_payload_len(payload.len())
            .unwrap();
        LoraFrame::new(p, payload.to_vec()).unwrap()
    }

    #[test]
    fn payload_length_must_match() {
        let p = LoraParams::new(7, 1.6e6, 5).unwrap().with_payload_len(2).unwrap();
        assert!(LoraFrame::new(p, vec![1]).is_err());
    }

    #[test]
    fn zero_payload_duration() {
        let f = frame(7, 1.6e6, 5, &[]);
        let w = build_frame_waveform::<f64>(&f, 11e6).unwrap();
        assert_eq!(w.len(), ((8.0 + 4.25) * 880.0) as usize);
        assert!((w.duration() - 12.25 * 80e-6).abs() < 1e-12);
    }

    fn assert_close(a: &[Complex<f64>], b: &[Complex<f64>]) {
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-9));
    }

    #[test]
    fn sections_are_where_the_layout_says() {
        let f = frame(7, 1.6e6, 6, &[0xa5, 0x3c]);
        let fs = 11e6;
        let w = build_frame_waveform::<f64>(&f, fs).unwrap();
        let layout = FrameLayout::new(f.params(), fs);
        let up = base_chirp::<f64>(f.params(), fs, ChirpDirection::Up).unwrap();
        let down = base_chirp::<f64>(f.params(), fs, ChirpDirection::Down).unwrap();
        let s = w.samples();
        assert_close(&s[..880], up.samples());
        let d = layout.downchirp_start();
        assert_close(&s[d..d + 880], down.samples());
        let silence = &s[layout.silence_start()..layout.payload_start()];
        assert_eq!(silence.len(), 220);
        assert!(silence.iter().all(|x| x.norm() == 0.0));
        let symbols = encode_payload(f.payload(), f.params()).unwrap();
        let p0 = layout.payload_start();
        let first = modulate_symbol::<f64>(symbols[0], f.params(), fs).unwrap();
        assert_close(&s[p0..p0 + 880], first.samples());
    }

    #[test]
    fn constant_envelope_outside_silence() {
        let f = frame(6, 1.6e6, 5, &[0x42]);
        let w = build_frame_waveform::<f64>(&f, 11e6).unwrap();
        let layout = FrameLayout::new(f.params(), 11e6);
        for (i, x) in w.samples().iter().enumerate() {
            if (layout.silence_start()..layout.payload_start()).contains(&i) {
                continue;
            }
            assert!((x.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fractional_symbol_lengths_do_not_drift() {
        // 3 MHz / 1.6 MHz · 2^7 = 240 samples; 2.5 MHz gives 200;
        // 2.3 MHz gives a non-integer 184 samples per symbol.
        for fs in [2.3e6, 3.1e6, 11e6] {
            let f = frame(7, 1.6e6, 7, &[1, 2, 3, 4, 5]);
            let w = build_frame_waveform::<f64>(&f, fs).unwrap();
            let exact = f.params().frame_symbols() * f.params().samples_per_symbol(fs);
            assert!((w.len() as f64 - exact).abs() <= 1.0, "fs {fs}");
        }
    }

    #[test]
    fn short_frame_airtime() {
        // SF6, 1.6 MHz, 4/5, one byte: 8 + 4.25 + 5 symbols of 40 µs.
        let f = frame(6, 1.6e6, 5, &[0]);
        assert!((f.params().airtime() - 17.25 * 40e-6).abs() < 1e-12);
    }
}
