//! 2.4 GHz LoRa physical layer: chirp synthesis, frame layout and the
//! payload coding chain (implicit header mode).

mod chirp;
mod coding;
mod frame;
mod params;

pub use chirp::{base_chirp, modulate_symbol, ChirpDirection};
pub use coding::{decode_payload, encode_payload, payload_symbol_count};
pub use frame::{build_frame_waveform, FrameLayout, LoraFrame};
pub use params::{LoraParams, DEFAULT_PREAMBLE_LEN};
