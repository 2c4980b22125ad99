use serde::{Deserialize, Serialize};

use super::demod::{demodulate_with, Dechirper};
use super::sync::sync_with;
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::lora::{decode_payload, LoraParams};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PayloadOutcome {
    Decoded {
        #[serde(with = "hex::serde")]
        bytes: Vec<u8>,
    },
    Failed {
        block: usize,
        codeword: usize,
    },
}

impl PayloadOutcome {
    pub fn bytes(&self) -> Option<&[u8]> {
        match self {
            Self::Decoded { bytes } => Some(bytes),
            Self::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RxResult {
    pub symbols: Vec<u32>,
    pub payload: PayloadOutcome,
    pub sync_offset: usize,
    pub per_symbol_peak_ratio: Vec<f64>,
    pub sync_values: [u32; 2],
    pub sync_word_matches: bool,
}

/// Synchronizes, demodulates and decodes the single frame in `buf`.
pub fn receive<T: Real>(buf: &IqBuffer<T>, params: &LoraParams) -> Result<RxResult> {
    let engine = Dechirper::new(params, buf.sample_rate())?;
    let sync = sync_with(&engine, buf, params)?;
    let demod = demodulate_with(&engine, buf, params, sync.payload_start, params.payload_symbol_count())?;
    let payload = match decode_payload(&demod.symbols, params) {
        Ok(bytes) => PayloadOutcome::Decoded { bytes },
        Err(Error::Uncorrectable { block, codeword }) => PayloadOutcome::Failed { block, codeword },
        Err(e) => return Err(e),
    };
    Ok(RxResult {
        symbols: demod.symbols,
        payload,
        sync_offset: sync.payload_start,
        per_symbol_peak_ratio: demod.peak_ratios,
        sync_values: sync.sync_values,
        sync_word_matches: sync.sync_word_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lora::{build_frame_waveform, FrameLayout, LoraFrame};
    use crate::rx::awgn;

    #[test]
    fn loopback_across_the_grid() {
        for sf in 5..=9u8 {
            for bw in [200e3, 400e3, 800e3, 1.6e6] {
                for cr in 5..=8u8 {
                    let payload: Vec<u8> = (0..5).map(|i| (i * 37 + sf as usize) as u8).collect();
                    let p = LoraParams::new(sf, bw, cr).unwrap().with_payload_len(5).unwrap();
                    let w = build_frame_waveform::<f64>(&LoraFrame::new(p, payload.clone()).unwrap(), 11e6)
                        .unwrap()
                        .delayed(321);
                    let rx = receive(&w, &p).unwrap();
                    assert_eq!(rx.sync_offset, 321 + FrameLayout::new(&p, 11e6).payload_start());
                    assert_eq!(rx.payload.bytes(), Some(&payload[..]), "sf{sf} bw{bw} cr{cr}");
                }
            }
        }
    }

    #[test]
    fn noisy_frame_decodes() {
        let payload = b"hello".to_vec();
        let p = LoraParams::new(7, 1.6e6, 8).unwrap().with_payload_len(5).unwrap();
        let w = build_frame_waveform::<f64>(&LoraFrame::new(p, payload.clone()).unwrap(), 11e6)
            .unwrap()
            .delayed(5000)
            .padded_to(60_000);
        let noisy = awgn(&w, 0.0, 4).unwrap();
        assert_eq!(receive(&noisy, &p).unwrap().payload.bytes(), Some(&payload[..]));
    }

    #[test]
    fn truncated_frame_is_a_length_error() {
        let p = LoraParams::new(7, 1.6e6, 5).unwrap().with_payload_len(8).unwrap();
        let w = build_frame_waveform::<f64>(&LoraFrame::new(p, vec![7; 8]).unwrap(), 11e6).unwrap();
        let cut = w.slice(0..w.len() - 1000);
        assert!(matches!(receive(&cut, &p), Err(Error::LengthMismatch { .. })));
    }
}
