use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::codebook::{cck_spread, Codebook};
use super::dqpsk::{bits_from_phases, phases_from_bits, SymbolParity};
use super::phase::{CckPhases, Quadrant};
use super::plcp::PreambleKind;
use super::scrambler::{Scrambler, DEFAULT_SCRAMBLER_SEED};
use super::{CHIPS_PER_SYMBOL, CHIP_RATE};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// Largest 802.11b PSDU in bytes.
pub const MAX_PAYLOAD_BYTES: usize = 4095;

/// Whether this crate scrambles payload bits, and the register contents at
/// the first payload bit. Disable when the injecting hardware scrambles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScramblerConfig {
    pub enabled: bool,
    pub seed: u8,
}

impl Default for ScramblerConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            seed: DEFAULT_SCRAMBLER_SEED,
        }
    }
}

/// One 11 Mbit/s 802.11b frame.
///
/// `reference_phase` is the φ1 the first payload symbol is differentially
/// encoded against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WifiFramePlan {
    #[serde(with = "hex::serde")]
    pub payload: Vec<u8>,
    pub preamble_kind: PreambleKind,
    pub scrambler: ScramblerConfig,
    pub reference_phase: Quadrant,
}

impl WifiFramePlan {
    pub fn new(payload: Vec<u8>) -> Result<Self> {
        let plan = Self {
            payload,
            preamble_kind: PreambleKind::Short,
            scrambler: ScramblerConfig::default(),
            reference_phase: Quadrant::ZERO,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.payload.len() > MAX_PAYLOAD_BYTES {
            return Err(Error::PayloadSize {
                len: self.payload.len(),
                max: MAX_PAYLOAD_BYTES,
            });
        }
        if self.payload.is_empty() {
            return Err(Error::Domain("802.11b frame payload is empty".into()));
        }
        Ok(())
    }

    /// Data rate in units of 500 kbit/s, as carried in radiotap.
    pub fn rate_500kbps(&self) -> u8 {
        22
    }

    /// Air time of the payload chips in microseconds.
    pub fn payload_duration_us(&self) -> f64 {
        (self.payload.len() * CHIPS_PER_SYMBOL) as f64 / CHIP_RATE * 1e6
    }
}

/// Payload bytes → CCK phase tuples, threading the DQPSK reference. Returns
/// the tuples and the φ1 of the last symbol.
pub fn bytes_to_codewords(
    payload: &[u8],
    scrambler: ScramblerConfig,
    reference_phase: Quadrant,
) -> (Vec<CckPhases>, Quadrant) {
    let bytes = if scrambler.enabled {
        Scrambler::new(scrambler.seed).scramble_bytes(payload)
    } else {
        payload.to_vec()
    };
    let mut prev = reference_phase;
    let phases = bytes
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let p = phases_from_bits(b, SymbolParity::of(i), prev);
            prev = p.phi1();
            p
        })
        .collect();
    (phases, prev)
}

/// Inverse of [`bytes_to_codewords`].
pub fn codewords_to_bytes(
    phases: &[CckPhases],
    scrambler: ScramblerConfig,
    reference_phase: Quadrant,
) -> (Vec<u8>, Quadrant) {
    let mut prev = reference_phase;
    let bytes: Vec<u8> = phases
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let b = bits_from_phases(*p, SymbolParity::of(i), prev);
            prev = p.phi1();
            b
        })
        .collect();
    let bytes = if scrambler.enabled {
        Scrambler::new(scrambler.seed).descramble_bytes(&bytes)
    } else {
        bytes
    };
    (bytes, prev)
}

/// Payload chips at 11 MHz: eight samples per payload byte.
pub fn modulate_payload<T: Real>(plan: &WifiFramePlan) -> Result<IqBuffer<T>> {
    plan.validate()?;
    let (phases, _) = bytes_to_codewords(&plan.payload, plan.scrambler, plan.reference_phase);
    let chips = phases.into_iter().flat_map(cck_spread::<T>).collect();
    Ok(IqBuffer::from_parts(chips, CHIP_RATE))
}

/// Recovers payload bytes from chip-aligned CCK samples by nearest-codeword
/// search.
pub fn demodulate_chips<T: Real>(
    chips: &[Complex<T>],
    codebook: &Codebook<T>,
    scrambler: ScramblerConfig,
    reference_phase: Quadrant,
) -> Result<Vec<u8>> {
    if !chips.len().is_multiple_of(CHIPS_PER_SYMBOL) {
        return Err(Error::LengthMismatch {
            expected: chips.len().next_multiple_of(CHIPS_PER_SYMBOL),
            actual: chips.len(),
        });
    }
    let phases: Vec<CckPhases> = chips
        .chunks_exact(CHIPS_PER_SYMBOL)
        .map(|c| {
            let chunk: &[Complex<T>; CHIPS_PER_SYMBOL] = c.try_into().expect("exact chunk");
            codebook.get(codebook.best_match(chunk).0).phases
        })
        .collect();
    Ok(codewords_to_bytes(&phases, scrambler, reference_phase).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cck::build_codebook;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chip_count_law() {
        for n in [1usize, 2, 17, 1000] {
            let plan = WifiFramePlan::new(vec![0xa5; n]).unwrap();
            assert_eq!(modulate_payload::<f64>(&plan).unwrap().len(), 8 * n);
        }
    }

    #[test]
    fn max_frame_duration() {
        let plan = WifiFramePlan::new(vec![0; MAX_PAYLOAD_BYTES]).unwrap();
        let w = modulate_payload::<f32>(&plan).unwrap();
        assert_eq!(w.len(), 32760);
        assert!((w.duration() * 1e6 - 2978.18).abs() < 0.01);
        assert!((plan.payload_duration_us() - 2978.18).abs() < 0.01);
    }

    #[test]
    fn oversize_and_empty_payloads_are_rejected() {
        assert!(matches!(
            WifiFramePlan::new(vec![0; MAX_PAYLOAD_BYTES + 1]),
            Err(Error::PayloadSize { len: 4096, max: 4095 })
        ));
        assert!(WifiFramePlan::new(vec![]).is_err());
    }

    #[test]
    fn loopback_through_codebook_search() {
        let book = build_codebook::<f64>();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for enabled in [true, false] {
            for reference in Quadrant::ALL {
                let payload: Vec<u8> = (0..300).map(|_| rng.random()).collect();
                let mut plan = WifiFramePlan::new(payload.clone()).unwrap();
                plan.scrambler.enabled = enabled;
                plan.reference_phase = reference;
                let chips = modulate_payload::<f64>(&plan).unwrap();
                let out = demodulate_chips(chips.samples(), &book, plan.scrambler, reference).unwrap();
                assert_eq!(out, payload);
            }
        }
    }

    #[test]
    fn every_byte_in_both_parities_round_trips() {
        // Two copies of all 256 bytes put every value at an even and an odd
        // symbol index.
        let book = build_codebook::<f32>();
        let payload: Vec<u8> = (0..=255u8).chain((0..=255u8).skip(1)).chain([0]).collect();
        let cfg = ScramblerConfig {
            enabled: false,
            seed: 0,
        };
        let mut plan = WifiFramePlan::new(payload.clone()).unwrap();
        plan.scrambler = cfg;
        let chips = modulate_payload::<f32>(&plan).unwrap();
        assert_eq!(
            demodulate_chips(chips.samples(), &book, cfg, Quadrant::ZERO).unwrap(),
            payload
        );
    }

    #[test]
    fn partial_symbol_is_rejected() {
        let book = build_codebook::<f64>();
        let chips = vec![Complex::new(1.0, 0.0); 12];
        assert!(demodulate_chips(&chips, &book, ScramblerConfig::default(), Quadrant::ZERO).is_err());
    }
}
