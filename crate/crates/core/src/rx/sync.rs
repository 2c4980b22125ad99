use serde::{Deserialize, Serialize};

use super::demod::{Dechirper, Peak};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::lora::{ChirpDirection, LoraParams};
use crate::scalar::Real;

/// Consecutive agreeing windows needed to accept a preamble.
pub const MIN_PREAMBLE_RUN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncResult {
    /// Sample index of the first payload symbol.
    pub payload_start: usize,
    pub downchirp_start: usize,
    /// Symbol values read from the two sync-word positions.
    pub sync_values: [u32; 2],
    pub sync_word_matches: bool,
}

fn cyclic_distance(a: u32, b: u32, m: u32) -> u32 {
    let d = a.abs_diff(b);
    d.min(m - d)
}

/// Locates a frame and returns where its payload starts.
///
/// Windows one symbol long are dechirped back to back; a preamble is a run
/// of at least [`MIN_PREAMBLE_RUN`] windows whose peaks clear a noise
/// threshold and agree within one bin. The common bin gives the offset of
/// the symbol grid, which is then refined to the sample by maximizing the
/// correlation with the base up-chirp over two windows. Walking the grid forward, the first symbol that dechirps
/// more strongly against a down-chirp than an up-chirp marks the end of
/// the preamble.
pub fn detect_and_sync<T: Real>(buf: &IqBuffer<T>, params: &LoraParams) -> Result<SyncResult> {
    let engine = Dechirper::new(params, buf.sample_rate())?;
    sync_with(&engine, buf, params)
}

pub(crate) fn sync_with<T: Real>(engine: &Dechirper<T>, buf: &IqBuffer<T>, params: &LoraParams) -> Result<SyncResult> {
    let n = engine.window_len();
    let m = params.chips_per_symbol();
    let spb = params.samples_per_symbol(buf.sample_rate());
    let samples = buf.samples();
    let window = |at: usize| &samples[at..at + n];
    let threshold = (3.0 * f64::from(m).ln()).max(8.0);

    let coarse = {
        let mut run: Vec<(usize, Peak)> = Vec::new();
        let mut found = None;
        let mut at = 0;
        while at + n <= samples.len() {
            let peak = engine.peak(window(at), ChirpDirection::Up);
            let agrees = run
                .first()
                .is_some_and(|(_, first)| cyclic_distance(first.bin, peak.bin, m) <= 1);
            if peak.ratio < threshold {
                run.clear();
            } else if agrees {
                run.push((at, peak));
            } else {
                run = vec![(at, peak)];
            }
            if run.len() >= MIN_PREAMBLE_RUN {
                found = Some(run[1]);
                break;
            }
            at += n;
        }
        let (at, peak) = found.ok_or(Error::DetectionFailed)?;
        // A window starting d samples into an up-chirp reads bin d·M/N.
        let d = (f64::from(peak.bin) * n as f64 / f64::from(m)).round() as usize;
        if at >= d {
            at - d
        } else {
            at + n - d
        }
    };

    let aligned_power = |at: usize| -> f64 {
        if at + n + n > samples.len() {
            return f64::NEG_INFINITY;
        }
        engine.correlation(window(at)) + engine.correlation(window(at + n))
    };
    let reach = (1.5 * n as f64 / f64::from(m)).ceil() as i64 + 2;
    let step = (reach / 8).max(1);
    let search = |center: i64, radius: i64, step: i64| -> i64 {
        let mut best = (center, f64::NEG_INFINITY);
        let mut d = -radius;
        while d <= radius {
            let at = center + d;
            if at >= 0 {
                let p = aligned_power(at as usize);
                if p > best.1 {
                    best = (at, p);
                }
            }
            d += step;
        }
        best.0
    };
    let rough = search(coarse as i64, reach, step);
    let grid = search(rough, step, 1) as usize;

    // Preamble, sync word and down-chirps span preamble_len + 4 symbols.
    let limit = params.preamble_len + 6;
    let at = |i: usize| grid + (i as f64 * spb).round() as usize;
    let is_down = |i: usize| -> Option<bool> {
        let pos = at(i);
        if pos + n > samples.len() {
            return None;
        }
        let up = engine.peak(window(pos), ChirpDirection::Up).power;
        let down = engine.bin_power(window(pos), ChirpDirection::Down, 0);
        Some(down > up)
    };
    for i in 2..limit {
        match (is_down(i), is_down(i + 1)) {
            (Some(true), Some(true)) => {
                let downchirp_start = at(i);
                let sync_values = [i - 2, i - 1].map(|j| engine.peak(window(at(j)), ChirpDirection::Up).bin);
                let payload_start = downchirp_start + (2.25 * spb).round() as usize;
                return Ok(SyncResult {
                    payload_start,
                    downchirp_start,
                    sync_values,
                    sync_word_matches: sync_values == params.sync_word,
                });
            }
            (None, _) | (_, None) => break,
            _ => {}
        }
    }
    Err(Error::DetectionFailed)
}
