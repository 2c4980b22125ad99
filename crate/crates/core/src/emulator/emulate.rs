use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cck::{codewords_to_bytes, CckPhases, Codebook, Quadrant, ScramblerConfig, CHIPS_PER_SYMBOL, CHIP_RATE};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::rx::evm_snr;
use crate::scalar::Real;

/// Settings for turning matched codewords into payload bytes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmulationConfig {
    pub scrambler: ScramblerConfig,
    /// φ1 the first codeword is differentially encoded against.
    pub reference_phase: Quadrant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmulationReport {
    pub chunk_count: usize,
    pub per_chunk_score: Vec<f64>,
    pub codeword_indices: Vec<u8>,
    /// EVM-SNR of the emulated chips against the zero-padded target.
    pub evm_snr_db: f64,
    /// Share of transmission time not carrying emulated signal; zero until
    /// the chips are segmented into frames.
    pub distortion_fraction: f64,
    /// Zero samples appended to reach a whole number of chunks.
    pub padding_samples: usize,
    /// Chunks containing padding; their codewords partly follow the
    /// tie-break rule rather than the target.
    pub padded_chunks: Vec<usize>,
}

/// Output of [`emulate_waveform`].
#[derive(Debug, Clone)]
pub struct Emulation<T> {
    pub report: EmulationReport,
    /// Concatenated chips of the chosen codewords.
    pub emulated: IqBuffer<T>,
    /// Payload bytes that reproduce `emulated` as a single CCK stream.
    pub payload: Vec<u8>,
    pub config: EmulationConfig,
}

impl<T: Real> Emulation<T> {
    pub fn phases(&self) -> Vec<CckPhases> {
        self.report
            .codeword_indices
            .iter()
            .map(|&i| CckPhases::from_index(usize::from(i)))
            .collect()
    }
}

/// Closest codeword to an 8-sample chunk under the zero-lag correlation
/// `Σ Re(s)·Re(c) + Im(s)·Im(c)`; ties resolve to the lowest index.
pub fn match_chunk<T: Real>(chunk: &[Complex<T>], codebook: &Codebook<T>) -> Result<(usize, T)> {
    let chunk: &[Complex<T>; CHIPS_PER_SYMBOL] = chunk.try_into().map_err(|_| {
        Error::Domain(format!(
            "chunk of {} samples; CCK symbols have {CHIPS_PER_SYMBOL}",
            chunk.len()
        ))
    })?;
    Ok(codebook.best_match(chunk))
}

/// Replaces each 8-sample chunk of an 11 MHz target with its closest CCK
/// codeword and inverts the result into payload bytes.
pub fn emulate_waveform<T: Real>(
    target: &IqBuffer<T>,
    codebook: &Codebook<T>,
    config: EmulationConfig,
) -> Result<Emulation<T>> {
    if (target.sample_rate() - CHIP_RATE).abs() > 1e-6 {
        return Err(Error::InvalidSampleRate(format!(
            "emulation needs the {CHIP_RATE} Hz chip rate, got {}",
            target.sample_rate()
        )));
    }
    if target.is_empty() {
        return Err(Error::Domain("empty target waveform".into()));
    }
    let padded = target.padded_to(target.len().next_multiple_of(CHIPS_PER_SYMBOL));
    let padding_samples = padded.len() - target.len();

    // Matching is independent per chunk; the ordered collect keeps the
    // result identical to a sequential pass.
    let matches: Vec<(usize, T)> = padded
        .samples()
        .par_chunks_exact(CHIPS_PER_SYMBOL)
        .map(|c| codebook.best_match(c.try_into().expect("exact chunk")))
        .collect();

    let chunk_count = matches.len();
    let codeword_indices: Vec<u8> = matches.iter().map(|&(i, _)| i as u8).collect();
    let per_chunk_score = matches.iter().map(|&(_, s)| s.as_f64()).collect();
    let chips: Vec<Complex<T>> = matches.iter().flat_map(|&(i, _)| codebook.get(i).chips).collect();
    let emulated = IqBuffer::from_parts(chips, CHIP_RATE);
    let phases: Vec<CckPhases> = matches.iter().map(|&(i, _)| codebook.get(i).phases).collect();
    let (payload, _) = codewords_to_bytes(&phases, config.scrambler, config.reference_phase);
    let evm_snr_db = evm_snr(&padded, &emulated)?;

    Ok(Emulation {
        report: EmulationReport {
            chunk_count,
            per_chunk_score,
            codeword_indices,
            evm_snr_db,
            distortion_fraction: 0.0,
            padding_samples,
            padded_chunks: if padding_samples > 0 {
                vec![chunk_count - 1]
            } else {
                vec![]
            },
        },
        emulated,
        payload,
        config,
    })
}
