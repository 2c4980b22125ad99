//! Emulation of 2.4 GHz LoRa downlink frames with IEEE 802.11b CCK.
//!
//! A LoRa baseband waveform synthesized at the 11 MHz CCK chip rate is cut
//! into eight-sample chunks; each chunk is replaced by the closest of the
//! 256 CCK codewords, and the codeword sequence is inverted into 802.11b
//! payload bytes. Frames too long for one 802.11b PSDU are split into a
//! train of frames whose preambles and inter-frame gaps overwrite short
//! stretches of the LoRa waveform. A software LoRa receiver and EVM-based
//! metrics check how well the result still looks like LoRa.
//!
//! Everything is generic over the sample type ([`Real`]: `f32` or `f64`);
//! the aliases below fix it to `f64`, which the CLI uses throughout.

pub mod cck;
pub mod emulator;
mod error;
pub mod io;
mod iq;
pub mod lora;
pub mod rx;
mod scalar;

pub use error::{Error, Result};
pub use iq::IqBuffer;
pub use scalar::Real;

pub use num_complex::Complex;

pub type Iq64 = IqBuffer<f64>;
pub type Iq32 = IqBuffer<f32>;
pub type Codebook64 = cck::Codebook<f64>;
pub type Codebook32 = cck::Codebook<f32>;
pub type Emulation64 = emulator::Emulation<f64>;
