//! Bit/phase mapping of the 11 Mbit/s CCK mode.
//!
//! Bits `d0..d7` of a symbol are the byte's bits LSB first. `(d0, d1)`
//! DQPSK-encode φ1 relative to the previous symbol's φ1, with an extra
//! rotation by π on odd-numbered symbols. `(d2, d3)`, `(d4, d5)` and
//! `(d6, d7)` select φ2, φ3 and φ4 directly.

use super::phase::{CckPhases, Quadrant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolParity {
    Even,
    Odd,
}

impl SymbolParity {
    /// Parity of the symbol at `index`, counting from 0 at the first PSDU
    /// symbol.
    pub fn of(index: usize) -> Self {
        if index.is_multiple_of(2) {
            SymbolParity::Even
        } else {
            SymbolParity::Odd
        }
    }

    fn rotation(self) -> Quadrant {
        match self {
            SymbolParity::Even => Quadrant::ZERO,
            SymbolParity::Odd => Quadrant::PI,
        }
    }
}

/// `(d0, d1)` → φ1 increment on even symbols: 00 → 0, 01 → π/2, 11 → π,
/// 10 → 3π/2.
fn dqpsk_step(d0: u8, d1: u8) -> Quadrant {
    match (d0, d1) {
        (0, 0) => Quadrant::ZERO,
        (0, 1) => Quadrant::HALF_PI,
        (1, 1) => Quadrant::PI,
        _ => Quadrant::THREE_HALF_PI,
    }
}

fn dqpsk_bits(step: Quadrant) -> (u8, u8) {
    match step.index() {
        0 => (0, 0),
        1 => (0, 1),
        2 => (1, 1),
        _ => (1, 0),
    }
}

/// `(di, di+1)` → phase: 00 → 0, 01 → π/2, 10 → π, 11 → 3π/2.
fn qpsk(first: u8, second: u8) -> Quadrant {
    Quadrant::wrap(first << 1 | second)
}

fn qpsk_bits(q: Quadrant) -> (u8, u8) {
    (q.index() >> 1, q.index() & 1)
}

pub fn phases_from_bits(byte: u8, parity: SymbolParity, prev_phi1: Quadrant) -> CckPhases {
    let d = |i: u32| (byte >> i) & 1;
    let phi1 = prev_phi1 + dqpsk_step(d(0), d(1)) + parity.rotation();
    CckPhases::new(phi1, qpsk(d(2), d(3)), qpsk(d(4), d(5)), qpsk(d(6), d(7)))
}

/// Exact inverse of [`phases_from_bits`] for the same parity and reference.
pub fn bits_from_phases(phases: CckPhases, parity: SymbolParity, prev_phi1: Quadrant) -> u8 {
    let [phi1, p2, p3, p4] = phases.0;
    let (d0, d1) = dqpsk_bits(phi1 - prev_phi1 - parity.rotation());
    let (d2, d3) = qpsk_bits(p2);
    let (d4, d5) = qpsk_bits(p3);
    let (d6, d7) = qpsk_bits(p4);
    [d0, d1, d2, d3, d4, d5, d6, d7]
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | b << i)
}
