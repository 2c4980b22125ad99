use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PREAMBLE_LEN: usize = 8;

/// Largest LoRa bandwidth in the 2.4 GHz band, with margin for the
/// 1625 kHz setting of real transceivers.
const MAX_BW_HZ: f64 = 1.625e6;

/// Modulation and framing parameters of one LoRa configuration.
///
/// `cr` is the coding-rate denominator: 5..=8 means 4/5..=4/8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoraParams {
    pub sf: u8,
    pub bw: f64,
    pub cr: u8,
    pub preamble_len: usize,
    pub sync_word: [u32; 2],
    pub payload_len: usize,
}

impl LoraParams {
    pub fn new(sf: u8, bw: f64, cr: u8) -> Result<Self> {
        let params = Self {
            sf,
            bw,
            cr,
            preamble_len: DEFAULT_PREAMBLE_LEN,
            sync_word: [0, 0],
            payload_len: 0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_preamble_len(mut self, preamble_len: usize) -> Result<Self> {
        self.preamble_len = preamble_len;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sync_word(mut self, sync_word: [u32; 2]) -> Result<Self> {
        self.sync_word = sync_word;
        self.validate()?;
        Ok(self)
    }

    pub fn with_payload_len(mut self, payload_len: usize) -> Result<Self> {
        self.payload_len = payload_len;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(5..=12).contains(&self.sf) {
            return Err(Error::InvalidParams(format!(
                "spreading factor {} outside 5..=12",
                self.sf
            )));
        }
        if !(self.bw.is_finite() && self.bw > 0.0 && self.bw <= MAX_BW_HZ) {
            return Err(Error::InvalidParams(format!(
                "bandwidth {} Hz outside (0, {MAX_BW_HZ}]",
                self.bw
            )));
        }
        if !(5..=8).contains(&self.cr) {
            return Err(Error::InvalidParams(format!(
                "coding rate 4/{} outside 4/5..=4/8",
                self.cr
            )));
        }
        if self.preamble_len < 2 {
            return Err(Error::InvalidParams(format!(
                "preamble of {} symbols is shorter than 2",
                self.preamble_len
            )));
        }
        if let Some(v) = self.sync_word.iter().find(|&&v| v >= self.chips_per_symbol()) {
            return Err(Error::InvalidParams(format!(
                "sync word symbol {v} does not fit SF{}",
                self.sf
            )));
        }
        Ok(())
    }

    /// `2^sf`: number of chips, and of FFT bins, per symbol.
    pub fn chips_per_symbol(&self) -> u32 {
        1 << self.sf
    }

    /// Symbol period `2^sf / bw` in seconds.
    pub fn symbol_duration(&self) -> f64 {
        f64::from(self.chips_per_symbol()) / self.bw
    }

    /// Samples per symbol at `fs`; not necessarily an integer.
    pub fn samples_per_symbol(&self, fs: f64) -> f64 {
        self.symbol_duration() * fs
    }

    pub fn payload_symbol_count(&self) -> usize {
        super::payload_symbol_count(self.payload_len, self.sf, self.cr)
    }

    /// Frame length in symbol periods: preamble, two sync symbols, two
    /// downchirps, a quarter-symbol gap, then the payload.
    pub fn frame_symbols(&self) -> f64 {
        self.preamble_len as f64 + 4.25 + self.payload_symbol_count() as f64
    }

    /// Frame airtime in seconds.
    pub fn airtime(&self) -> f64 {
        self.frame_symbols() * self.symbol_duration()
    }
}
