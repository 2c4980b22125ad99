use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::lora::{base_chirp, ChirpDirection, LoraParams};
use crate::scalar::Real;

/// Peak-to-mean bin power below which a symbol decision is unreliable; a
/// clean symbol reaches `2^sf`, a flat spectrum 1.
pub const LOW_CONFIDENCE_RATIO: f64 = 8.0;

/// Argmax bin of one dechirped window and its confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub bin: u32,
    pub power: f64,
    pub ratio: f64,
}

/// Dechirp-and-FFT engine for one parameter set and sample rate.
///
/// A window of `N = round(T·fs)` samples is multiplied by a reference chirp
/// and transformed with an N-point FFT. At `fs > bw` the tone of symbol `k`
/// lands in bin `k` before the chirp wraps and in bin `k - 2^sf` after, so
/// the two aliases are summed coherently into `2^sf` folded bins.
pub struct Dechirper<T: Real> {
    n: usize,
    m: usize,
    up: Vec<Complex<T>>,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> Dechirper<T> {
    pub fn new(params: &LoraParams, fs: f64) -> Result<Self> {
        let up = base_chirp::<T>(params, fs, ChirpDirection::Up)?.into_samples();
        let n = up.len();
        Ok(Self {
            n,
            m: params.chips_per_symbol() as usize,
            up,
            fft: FftPlanner::new().plan_fft_forward(n),
        })
    }

    /// Samples per dechirp window.
    pub fn window_len(&self) -> usize {
        self.n
    }

    fn folded(&self, window: &[Complex<T>], dir: ChirpDirection) -> Vec<f64> {
        debug_assert_eq!(window.len(), self.n);
        let mut x: Vec<Complex<T>> = match dir {
            ChirpDirection::Up => window.iter().zip(&self.up).map(|(s, r)| s * r.conj()).collect(),
            ChirpDirection::Down => window.iter().zip(&self.up).map(|(s, r)| s * r).collect(),
        };
        self.fft.process(&mut x);
        let shift = self.n - self.m;
        (0..self.m)
            .map(|b| {
                let y = if shift == 0 { x[b] } else { x[b] + x[b + shift] };
                y.norm_sqr().as_f64()
            })
            .collect()
    }

    /// Strongest folded bin after dechirping with the base up-chirp (to read
    /// up-chirp symbols) or its conjugate (to spot down-chirps at bin 0).
    pub fn peak(&self, window: &[Complex<T>], dir: ChirpDirection) -> Peak {
        let bins = self.folded(window, dir);
        let (bin, power) = bins.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, &p)| if p > best.1 { (i, p) } else { best },
        );
        let mean = bins.iter().sum::<f64>() / bins.len() as f64;
        let ratio = if mean > 0.0 { power / mean } else { 0.0 };
        Peak {
            bin: bin as u32,
            power,
            ratio,
        }
    }

    /// `|Σ window·conj(base up-chirp)|²`: matched-filter output for an
    /// unmodulated up-chirp starting exactly at the window start.
    pub fn correlation(&self, window: &[Complex<T>]) -> f64 {
        window
            .iter()
            .zip(&self.up)
            .map(|(s, r)| {
                let p = s * r.conj();
                Complex::new(p.re.as_f64(), p.im.as_f64())
            })
            .sum::<Complex<f64>>()
            .norm_sqr()
    }

    /// Folded power of a single bin.
    pub fn bin_power(&self, window: &[Complex<T>], dir: ChirpDirection, bin: u32) -> f64 {
        self.folded(window, dir)[bin as usize]
    }
}

/// Symbol decisions for consecutive windows.
#[derive(Debug, Clone, PartialEq)]
pub struct Demodulated {
    pub symbols: Vec<u32>,
    pub peak_ratios: Vec<f64>,
}

impl Demodulated {
    pub fn low_confidence(&self) -> Vec<usize> {
        self.peak_ratios
            .iter()
            .enumerate()
            .filter(|(_, &r)| r < LOW_CONFIDENCE_RATIO)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Reads `count` up-chirp symbols starting at sample `start`; symbol `i`
/// begins at `start + round(i·T·fs)`.
pub fn dechirp_demodulate<T: Real>(
    buf: &IqBuffer<T>,
    params: &LoraParams,
    start: usize,
    count: usize,
) -> Result<Demodulated> {
    let engine = Dechirper::new(params, buf.sample_rate())?;
    demodulate_with(&engine, buf, params, start, count)
}

pub(crate) fn demodulate_with<T: Real>(
    engine: &Dechirper<T>,
    buf: &IqBuffer<T>,
    params: &LoraParams,
    start: usize,
    count: usize,
) -> Result<Demodulated> {
    let spb = params.samples_per_symbol(buf.sample_rate());
    let offset = |i: usize| start + (i as f64 * spb).round() as usize;
    if count > 0 {
        let needed = offset(count - 1) + engine.window_len();
        if needed > buf.len() {
            return Err(Error::LengthMismatch {
                expected: needed,
                actual: buf.len(),
            });
        }
    }
    let (symbols, peak_ratios) = (0..count)
        .map(|i| {
            let at = offset(i);
            let p = engine.peak(&buf.samples()[at..at + engine.window_len()], ChirpDirection::Up);
            (p.bin, p.ratio)
        })
        .unzip();
    Ok(Demodulated { symbols, peak_ratios })
}
