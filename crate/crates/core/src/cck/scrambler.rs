//! Self-synchronizing 802.11b scrambler, polynomial `z^-7 + z^-4 + 1`.

/// Register contents at the first scrambled bit. Bit `i` holds the output
/// from `i + 1` bit periods earlier.
pub const DEFAULT_SCRAMBLER_SEED: u8 = 0b110_1100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scrambler {
    state: u8,
}

impl Scrambler {
    pub fn new(seed: u8) -> Self {
        Self { state: seed & 0x7f }
    }

    pub fn state(&self) -> u8 {
        self.state
    }

    fn taps(&self) -> bool {
        ((self.state >> 3) ^ (self.state >> 6)) & 1 == 1
    }

    fn shift(&mut self, bit: bool) {
        self.state = ((self.state << 1) | u8::from(bit)) & 0x7f;
    }

    pub fn scramble_bit(&mut self, bit: bool) -> bool {
        let out = bit ^ self.taps();
        self.shift(out);
        out
    }

    pub fn descramble_bit(&mut self, bit: bool) -> bool {
        let out = bit ^ self.taps();
        self.shift(bit);
        out
    }

    /// Scrambles bytes serialized LSB first.
    pub fn scramble_bytes(&mut self, bytes: &[u8]) -> Vec<u8> {
        self.map_bytes(bytes, Self::scramble_bit)
    }

    pub fn descramble_bytes(&mut self, bytes: &[u8]) -> Vec<u8> {
        self.map_bytes(bytes, Self::descramble_bit)
    }

    fn map_bytes(&mut self, bytes: &[u8], mut f: impl FnMut(&mut Self, bool) -> bool) -> Vec<u8> {
        bytes
            .iter()
            .map(|&b| (0..8).fold(0u8, |acc, i| acc | u8::from(f(self, (b >> i) & 1 == 1)) << i))
            .collect()
    }
}

pub fn scramble(bits: &[bool], seed: u8) -> Vec<bool> {
    let mut s = Scrambler::new(seed);
    bits.iter().map(|&b| s.scramble_bit(b)).collect()
}

pub fn descramble(bits: &[bool], seed: u8) -> Vec<bool> {
    let mut s = Scrambler::new(seed);
    bits.iter().map(|&b| s.descramble_bit(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Recurrence `y[n] = x[n] ^ y[n-4] ^ y[n-7]` over an explicit history.
    fn pn_oracle(seed: u8, n: usize) -> Vec<bool> {
        // history[k] = output k+1 periods before the first bit
        let mut y: Vec<bool> = (0..7).rev().map(|k| (seed >> k) & 1 == 1).collect();
        for i in 0..n {
            let v = y[i + 7 - 4] ^ y[i];
            y.push(v);
        }
        y.split_off(7)
    }

    #[test]
    fn zero_input_yields_pn_sequence() {
        for seed in [DEFAULT_SCRAMBLER_SEED, 0b001_1011, 1, 0x7f] {
            assert_eq!(scramble(&vec![false; 500], seed), pn_oracle(seed, 500));
        }
    }

    #[test]
    fn pn_sequence_has_period_127() {
        let pn = scramble(&vec![false; 400], DEFAULT_SCRAMBLER_SEED);
        assert_eq!(pn[..127], pn[127..254]);
        assert_ne!(pn[..63], pn[63..126]);
    }

    #[test]
    fn byte_and_bit_interfaces_agree() {
        let bytes = [0x00, 0xff, 0x5a, 0x81];
        let bits: Vec<bool> = bytes
            .iter()
            .flat_map(|b| (0..8).map(move |i| (b >> i) & 1 == 1))
            .collect();
        let by_bits = scramble(&bits, 0x33);
        let by_bytes = Scrambler::new(0x33).scramble_bytes(&bytes);
        let repacked: Vec<bool> = by_bytes
            .iter()
            .flat_map(|b| (0..8).map(move |i| (b >> i) & 1 == 1))
            .collect();
        assert_eq!(by_bits, repacked);
    }

    proptest! {
        #[test]
        fn descramble_inverts_scramble(bits in proptest::collection::vec(any::<bool>(), 0..10_000), seed in 0u8..128) {
            let s = scramble(&bits, seed);
            prop_assert_eq!(s.len(), bits.len());
            prop_assert_eq!(descramble(&s, seed), bits);
        }
    }
}
