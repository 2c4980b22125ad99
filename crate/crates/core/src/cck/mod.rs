//! IEEE 802.11b 11 Mbit/s CCK physical layer at one sample per chip.

mod codebook;
mod dqpsk;
mod modulate;
mod phase;
mod plcp;
mod scrambler;

pub use codebook::{build_codebook, cck_spread, CckCodeword, Codebook, CODEBOOK_SIZE};
pub use dqpsk::{bits_from_phases, phases_from_bits, SymbolParity};
pub use modulate::{
    bytes_to_codewords, codewords_to_bytes, demodulate_chips, modulate_payload, ScramblerConfig, WifiFramePlan,
    MAX_PAYLOAD_BYTES,
};
pub use phase::{CckPhases, Quadrant};
pub use plcp::{plcp_waveform, preamble_waveform, PreambleKind, BARKER};
pub use scrambler::{descramble, scramble, Scrambler, DEFAULT_SCRAMBLER_SEED};

/// 802.11b chip rate; also the sample rate of every CCK waveform here.
pub const CHIP_RATE: f64 = 11e6;

/// Chips per CCK symbol.
pub const CHIPS_PER_SYMBOL: usize = 8;
