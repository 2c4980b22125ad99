//! PLCP preamble and header waveforms. They carry no emulated content and
//! are rendered only as the fixed part of each transmitted frame.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::phase::Quadrant;
use super::scrambler::Scrambler;
use super::CHIP_RATE;
use crate::iq::IqBuffer;
use crate::scalar::Real;

pub const BARKER: [i8; 11] = [1, -1, 1, 1, -1, 1, 1, 1, -1, -1, -1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreambleKind {
    Long,
    Short,
}

impl PreambleKind {
    /// Preamble plus PLCP header duration in microseconds.
    pub fn duration_us(self) -> f64 {
        match self {
            PreambleKind::Long => 192.0,
            PreambleKind::Short => 96.0,
        }
    }

    pub fn samples(self) -> usize {
        (self.duration_us() * CHIP_RATE / 1e6).round() as usize
    }

    fn scrambler_seed(self) -> u8 {
        match self {
            PreambleKind::Long => 0b110_1100,
            PreambleKind::Short => 0b001_1011,
        }
    }
}

impl std::str::FromStr for PreambleKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "long" => Ok(PreambleKind::Long),
            "short" => Ok(PreambleKind::Short),
            other => Err(format!("unknown preamble kind {other:?}; use long or short")),
        }
    }
}

fn push_bits(out: &mut Vec<bool>, value: u32, count: u32) {
    out.extend((0..count).map(|i| (value >> i) & 1 == 1));
}

/// CRC-16 (x^16 + x^12 + x^5 + 1, preset ones, complemented output) over the
/// header bits in transmission order; returned bits are MSB first.
fn header_crc(bits: &[bool]) -> Vec<bool> {
    let mut crc: u16 = 0xffff;
    for &b in bits {
        let feedback = ((crc >> 15) & 1 == 1) ^ b;
        crc <<= 1;
        if feedback {
            crc ^= 0x1021;
        }
    }
    let crc = !crc;
    (0..16).rev().map(|i| (crc >> i) & 1 == 1).collect()
}

/// SIGNAL, SERVICE, LENGTH and CRC fields for an 11 Mbit/s PSDU.
fn header_bits(psdu_len: usize) -> Vec<bool> {
    let bits = psdu_len as u32 * 8;
    let length_us = bits.div_ceil(11);
    // Length extension bit: set when rounding up added a full octet.
    let extension = length_us * 11 - bits >= 8;
    let mut out = Vec::with_capacity(48);
    push_bits(&mut out, 0x6e, 8);
    push_bits(&mut out, 0x04 | if extension { 0x80 } else { 0 }, 8);
    push_bits(&mut out, length_us & 0xffff, 16);
    let crc = header_crc(&out);
    out.extend(crc);
    out
}

fn spread_symbol<T: Real>(out: &mut Vec<Complex<T>>, phase: Quadrant) {
    let p: Complex<T> = phase.phasor();
    out.extend(BARKER.iter().map(|&c| if c > 0 { p } else { -p }));
}

/// PLCP preamble and header for a `psdu_len`-byte frame at 11 Mbit/s,
/// Barker-spread at 11 MHz: DBPSK throughout for the long format; DBPSK
/// preamble and DQPSK header for the short one.
pub fn plcp_waveform<T: Real>(kind: PreambleKind, psdu_len: usize) -> IqBuffer<T> {
    let mut bits = Vec::with_capacity(192);
    match kind {
        PreambleKind::Long => {
            bits.extend(std::iter::repeat_n(true, 128));
            push_bits(&mut bits, 0xf3a0, 16);
        }
        PreambleKind::Short => {
            bits.extend(std::iter::repeat_n(false, 56));
            push_bits(&mut bits, 0x05cf, 16);
        }
    }
    let dbpsk_bits = bits.len();
    bits.extend(header_bits(psdu_len));

    let mut scrambler = Scrambler::new(kind.scrambler_seed());
    let bits: Vec<bool> = bits.into_iter().map(|b| scrambler.scramble_bit(b)).collect();

    let mut out = Vec::with_capacity(kind.samples());
    let mut phase = Quadrant::ZERO;
    let (dbpsk, rest) = match kind {
        PreambleKind::Long => (&bits[..], &bits[bits.len()..]),
        PreambleKind::Short => bits.split_at(dbpsk_bits),
    };
    for &b in dbpsk {
        if b {
            phase = phase + Quadrant::PI;
        }
        spread_symbol(&mut out, phase);
    }
    for pair in rest.chunks(2) {
        let step = match (pair[0], pair[1]) {
            (false, false) => Quadrant::ZERO,
            (false, true) => Quadrant::HALF_PI,
            (true, true) => Quadrant::PI,
            (true, false) => Quadrant::THREE_HALF_PI,
        };
        phase = phase + step;
        spread_symbol(&mut out, phase);
    }
    debug_assert_eq!(out.len(), kind.samples());
    IqBuffer::from_parts(out, CHIP_RATE)
}

/// PLCP preamble and header of a maximum-length frame.
pub fn preamble_waveform<T: Real>(kind: PreambleKind) -> IqBuffer<T> {
    plcp_waveform(kind, super::MAX_PAYLOAD_BYTES)
}
