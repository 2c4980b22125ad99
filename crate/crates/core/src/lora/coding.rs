//! Payload coding chain: Hamming-family FEC, diagonal interleaving and
//! Gray mapping. Whitening and payload CRC are not applied.
//!
//! Each byte is split into two nibbles, low nibble first. A nibble
//! `d3 d2 d1 d0` becomes a `cr`-bit codeword with the data in bits 0..4
//! and parity bits above it:
//!
//! | cr | parity bits           | capability            |
//! |----|-----------------------|-----------------------|
//! | 5  | d0^d1^d2^d3           | detects 1 error       |
//! | 6  | p0 p1                 | detects 1 error       |
//! | 7  | p0 p1 p2 (Hamming)    | corrects 1 error      |
//! | 8  | p0 p1 p2 p3 (SECDED)  | corrects 1, detects 2 |
//!
//! with `p0 = d0^d1^d2`, `p1 = d1^d2^d3`, `p2 = d0^d1^d3` and `p3` the
//! overall parity of the other seven bits (which equals `d0^d2^d3`).

use super::LoraParams;
use crate::error::{Error, Result};

/// Number of payload symbols for `payload_len` bytes: nibbles are padded to
/// whole interleaver blocks of `sf` codewords, each emitting `cr` symbols.
pub fn payload_symbol_count(payload_len: usize, sf: u8, cr: u8) -> usize {
    (2 * payload_len).div_ceil(usize::from(sf)) * usize::from(cr)
}

fn bit(v: u8, i: u32) -> u8 {
    (v >> i) & 1
}

fn parity7(nibble: u8) -> u8 {
    let d = |i| bit(nibble, i);
    let p0 = d(0) ^ d(1) ^ d(2);
    let p1 = d(1) ^ d(2) ^ d(3);
    let p2 = d(0) ^ d(1) ^ d(3);
    p0 | p1 << 1 | p2 << 2
}

pub(crate) fn hamming_encode(nibble: u8, cr: u8) -> u8 {
    let nibble = nibble & 0x0f;
    let parity = parity7(nibble);
    let word7 = nibble | parity << 4;
    match cr {
        5 => nibble | (nibble.count_ones() as u8 & 1) << 4,
        6 => nibble | (parity & 0b11) << 4,
        7 => word7,
        8 => word7 | (word7.count_ones() as u8 & 1) << 7,
        _ => unreachable!("coding rate validated by LoraParams"),
    }
}

/// Syndrome columns of the (7,4) code for bit positions 0..7.
const SYNDROME_COLUMNS: [u8; 7] = [0b101, 0b111, 0b011, 0b110, 0b001, 0b010, 0b100];

/// Returns the corrected nibble, or `None` for a detected uncorrectable error.
pub(crate) fn hamming_decode(word: u8, cr: u8) -> Option<u8> {
    let nibble = word & 0x0f;
    let check = parity7(nibble) ^ (word >> 4);
    let correct = |syndrome: u8| {
        let pos = SYNDROME_COLUMNS.iter().position(|&c| c == syndrome)?;
        Some((word ^ (1 << pos)) & 0x0f)
    };
    match cr {
        5 => (word & 0x1f).count_ones().is_multiple_of(2).then_some(nibble),
        6 => (check & 0b11 == 0).then_some(nibble),
        7 => match check & 0b111 {
            0 => Some(nibble),
            s => correct(s),
        },
        8 => {
            let odd = word.count_ones() % 2 == 1;
            match (check & 0b111, odd) {
                // Clean, or a flipped overall parity bit.
                (0, _) => Some(nibble),
                (s, true) => correct(s),
                // Nonzero syndrome with even parity: two errors.
                (_, false) => None,
            }
        }
        _ => unreachable!("coding rate validated by LoraParams"),
    }
}

/// Diagonal interleaver: `sf` codewords of `cr` bits become `cr` symbols of
/// `sf` bits, with bit `j` of symbol `i` taken from bit `i` of codeword
/// `(i + j) mod sf`.
pub(crate) fn interleave_block(codewords: &[u8], sf: u8, cr: u8) -> Vec<u32> {
    let sf = usize::from(sf);
    debug_assert_eq!(codewords.len(), sf);
    (0..usize::from(cr))
        .map(|i| {
            (0..sf).fold(0u32, |acc, j| {
                acc | u32::from(bit(codewords[(i + j) % sf], i as u32)) << j
            })
        })
        .collect()
}

pub(crate) fn deinterleave_block(symbols: &[u32], sf: u8) -> Vec<u8> {
    let sf = usize::from(sf);
    let mut codewords = vec![0u8; sf];
    for (i, &s) in symbols.iter().enumerate() {
        for j in 0..sf {
            codewords[(i + j) % sf] |= (((s >> j) & 1) as u8) << i;
        }
    }
    codewords
}

fn gray_encode(v: u32) -> u32 {
    v ^ (v >> 1)
}

/// Inverse Gray map; applied on transmit so that an off-by-one symbol error
/// at the receiver flips a single interleaved bit.
pub(crate) fn gray_decode(mut v: u32) -> u32 {
    let mut shift = v >> 1;
    while shift != 0 {
        v ^= shift;
        shift >>= 1;
    }
    v
}

/// Encodes `payload` into LoRa symbol values in `[0, 2^sf)`.
pub fn encode_payload(payload: &[u8], params: &LoraParams) -> Result<Vec<u32>> {
    params.validate()?;
    if payload.len() != params.payload_len {
        return Err(Error::LengthMismatch {
            expected: params.payload_len,
            actual: payload.len(),
        });
    }
    let sf = usize::from(params.sf);
    let mut nibbles: Vec<u8> = payload.iter().flat_map(|b| [b & 0x0f, b >> 4]).collect();
    nibbles.resize(nibbles.len().div_ceil(sf) * sf, 0);
    let mut symbols = Vec::with_capacity(params.payload_symbol_count());
    for block in nibbles.chunks(sf) {
        let codewords: Vec<u8> = block.iter().map(|&n| hamming_encode(n, params.cr)).collect();
        symbols.extend(
            interleave_block(&codewords, params.sf, params.cr)
                .into_iter()
                .map(gray_decode),
        );
    }
    Ok(symbols)
}

/// Inverts [`encode_payload`], correcting errors where the coding rate allows.
pub fn decode_payload(symbols: &[u32], params: &LoraParams) -> Result<Vec<u8>> {
    params.validate()?;
    let expected = params.payload_symbol_count();
    if symbols.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: symbols.len(),
        });
    }
    if let Some(&s) = symbols.iter().find(|&&s| s >= params.chips_per_symbol()) {
        return Err(Error::Domain(format!("symbol {s} out of range for SF{}", params.sf)));
    }
    let mut nibbles = Vec::with_capacity(symbols.len());
    for (block, chunk) in symbols.chunks(usize::from(params.cr)).enumerate() {
        let interleaved: Vec<u32> = chunk.iter().map(|&s| gray_encode(s)).collect();
        for (codeword, word) in deinterleave_block(&interleaved, params.sf).into_iter().enumerate() {
            let nibble = hamming_decode(word, params.cr).ok_or(Error::Uncorrectable { block, codeword })?;
            nibbles.push(nibble);
        }
    }
    Ok(nibbles
        .chunks(2)
        .take(params.payload_len)
        .map(|n| n[0] | n[1] << 4)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(sf: u8, cr: u8, len: usize) -> LoraParams {
        LoraParams::new(sf, 1.6e6, cr).unwrap().with_payload_len(len).unwrap()
    }

    #[test]
    fn hamming_round_trip_all_nibbles() {
        for cr in 5..=8 {
            for n in 0..16 {
                assert_eq!(hamming_decode(hamming_encode(n, cr), cr), Some(n));
            }
        }
    }

    #[test]
    fn hamming_minimum_distances() {
        // Brute-force distance over all codeword pairs.
        for (cr, dmin) in [(5, 2), (6, 2), (7, 3), (8, 4)] {
            let mut best = u32::MAX;
            for a in 0..16u8 {
                for b in 0..a {
                    best = best.min((hamming_encode(a, cr) ^ hamming_encode(b, cr)).count_ones());
                }
            }
            assert_eq!(best, dmin, "cr {cr}");
        }
    }

    #[test]
    fn single_errors_corrected_or_detected() {
        for cr in 5..=8u8 {
            for n in 0..16 {
                for pos in 0..cr {
                    let word = hamming_encode(n, cr) ^ (1 << pos);
                    let out = hamming_decode(word, cr);
                    if cr >= 7 {
                        assert_eq!(out, Some(n), "cr {cr} nibble {n} pos {pos}");
                    } else {
                        assert_eq!(out, None, "cr {cr} nibble {n} pos {pos}");
                    }
                }
            }
        }
    }

    #[test]
    fn double_errors_detected_at_cr8() {
        for n in 0..16 {
            for a in 0..8 {
                for b in 0..a {
                    let word = hamming_encode(n, 8) ^ (1 << a) ^ (1 << b);
                    assert_eq!(hamming_decode(word, 8), None);
                }
            }
        }
    }

    #[test]
    fn p3_is_overall_parity() {
        for n in 0..16u8 {
            let d = |i| (n >> i) & 1u8;
            assert_eq!(hamming_encode(n, 8) >> 7, d(0) ^ d(2) ^ d(3));
        }
    }

    #[test]
    fn gray_maps_are_inverse() {
        for v in 0..4096 {
            assert_eq!(gray_encode(gray_decode(v)), v);
        }
        // Adjacent symbols differ in exactly one Gray bit.
        for s in 0..4095u32 {
            assert_eq!((gray_encode(s) ^ gray_encode(s + 1)).count_ones(), 1);
        }
    }

    #[test]
    fn symbol_count_law() {
        assert_eq!(payload_symbol_count(0, 7, 5), 0);
        assert_eq!(payload_symbol_count(1, 6, 5), 5);
        assert_eq!(payload_symbol_count(16, 12, 8), 24);
        assert_eq!(payload_symbol_count(3, 5, 6), 12);
    }

    #[test]
    fn empty_payload() {
        let p = params(7, 5, 0);
        assert!(encode_payload(&[], &p).unwrap().is_empty());
        assert!(decode_payload(&[], &p).unwrap().is_empty());
    }

    #[test]
    fn round_trip_random_payloads() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let sf = rng.random_range(5..=12);
            let cr = rng.random_range(5..=8);
            let len = rng.random_range(0..40);
            let payload: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            let p = params(sf, cr, len);
            let symbols = encode_payload(&payload, &p).unwrap();
            assert_eq!(symbols.len(), p.payload_symbol_count());
            assert!(symbols.iter().all(|&s| s < p.chips_per_symbol()));
            assert_eq!(decode_payload(&symbols, &p).unwrap(), payload);
        }
    }

    /// Flips `bit` of interleaved symbol `index`, i.e. after the interleaver
    /// and before the Gray map.
    fn flip_interleaved(symbols: &mut [u32], index: usize, bit: u32) {
        symbols[index] = gray_decode(gray_encode(symbols[index]) ^ (1 << bit));
    }

    #[test]
    fn cr8_survives_every_single_bit_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for sf in 5..=12u8 {
            let payload: Vec<u8> = (0..9).map(|_| rng.random()).collect();
            let p = params(sf, 8, payload.len());
            let clean = encode_payload(&payload, &p).unwrap();
            for index in 0..clean.len() {
                for bit in 0..u32::from(sf) {
                    let mut symbols = clean.clone();
                    flip_interleaved(&mut symbols, index, bit);
                    assert_eq!(decode_payload(&symbols, &p).unwrap(), payload);
                }
            }
        }
    }

    #[test]
    fn cr5_reports_the_failing_block() {
        let payload: Vec<u8> = (0..12).collect();
        let p = params(7, 5, payload.len());
        let clean = encode_payload(&payload, &p).unwrap();
        for index in 0..clean.len() {
            let mut symbols = clean.clone();
            flip_interleaved(&mut symbols, index, 3);
            match decode_payload(&symbols, &p) {
                Err(Error::Uncorrectable { block, codeword }) => {
                    assert_eq!(block, index / 5);
                    // Bit j of symbol i comes from codeword (i + j) mod sf.
                    assert_eq!(codeword, (index % 5 + 3) % 7);
                }
                other => panic!("expected decode failure, got {other:?}"),
            }
        }
    }

    #[test]
    fn wrong_symbol_count_is_rejected() {
        let p = params(7, 5, 2);
        assert!(matches!(
            decode_payload(&[0; 4], &p),
            Err(Error::LengthMismatch { expected: 5, actual: 4 })
        ));
        assert!(matches!(decode_payload(&[200; 5], &p), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn interleaver_is_a_bijection(sf in 5u8..=12, cr in 5u8..=8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let codewords: Vec<u8> = (0..sf).map(|_| rng.random::<u8>() & ((1u16 << cr) - 1) as u8).collect();
            let symbols = interleave_block(&codewords, sf, cr);
            prop_assert_eq!(symbols.len(), usize::from(cr));
            prop_assert!(symbols.iter().all(|&s| s < 1 << sf));
            prop_assert_eq!(deinterleave_block(&symbols, sf), codewords);
        }
    }
}
