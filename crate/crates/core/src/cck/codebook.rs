use num_complex::Complex;
use sha2::{Digest, Sha256};

use super::phase::{CckPhases, Quadrant};
use super::CHIPS_PER_SYMBOL;
use crate::scalar::Real;

pub const CODEBOOK_SIZE: usize = 256;

/// Chip phases relative to φ1, as `(uses φ2, uses φ3, uses φ4, negated)`.
const CHIP_TERMS: [(bool, bool, bool, bool); CHIPS_PER_SYMBOL] = [
    (true, true, true, false),
    (false, true, true, false),
    (true, false, true, false),
    (false, false, true, true),
    (true, true, false, false),
    (false, true, false, false),
    (true, false, false, true),
    (false, false, false, false),
];

/// Phase of each chip once φ1 is factored out.
fn chip_offsets(p2: Quadrant, p3: Quadrant, p4: Quadrant) -> [Quadrant; CHIPS_PER_SYMBOL] {
    CHIP_TERMS.map(|(a, b, c, neg)| {
        let mut q = Quadrant::ZERO;
        if a {
            q = q + p2;
        }
        if b {
            q = q + p3;
        }
        if c {
            q = q + p4;
        }
        if neg {
            q = q + Quadrant::PI;
        }
        q
    })
}

/// The eight chips of the 11 Mbit/s CCK codeword for `phases`:
///
/// `c = (e^{j(φ1+φ2+φ3+φ4)}, e^{j(φ1+φ3+φ4)}, e^{j(φ1+φ2+φ4)}, -e^{j(φ1+φ4)},
///       e^{j(φ1+φ2+φ3)}, e^{j(φ1+φ3)}, -e^{j(φ1+φ2)}, e^{jφ1})`.
pub fn cck_spread<T: Real>(phases: CckPhases) -> [Complex<T>; CHIPS_PER_SYMBOL] {
    let [p1, p2, p3, p4] = phases.0;
    chip_offsets(p2, p3, p4).map(|q| (p1 + q).phasor())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CckCodeword<T> {
    pub phases: CckPhases,
    pub chips: [Complex<T>; CHIPS_PER_SYMBOL],
}

/// All 256 CCK codewords in lexicographic order of `(φ1, φ2, φ3, φ4)`.
#[derive(Debug, Clone)]
pub struct Codebook<T> {
    words: Vec<CckCodeword<T>>,
    /// `chip_offsets` for each `(φ2, φ3, φ4)`, indexed like the low 6 bits
    /// of a codeword index.
    offsets: Vec<[Quadrant; CHIPS_PER_SYMBOL]>,
}

pub fn build_codebook<T: Real>() -> Codebook<T> {
    let words = (0..CODEBOOK_SIZE)
        .map(|i| {
            let phases = CckPhases::from_index(i);
            CckCodeword {
                phases,
                chips: cck_spread(phases),
            }
        })
        .collect();
    let offsets = (0..CODEBOOK_SIZE / 4)
        .map(|i| {
            let [_, p2, p3, p4] = CckPhases::from_index(i).0;
            chip_offsets(p2, p3, p4)
        })
        .collect();
    Codebook { words, offsets }
}

impl<T: Real> Default for Codebook<T> {
    fn default() -> Self {
        build_codebook()
    }
}

impl<T: Real> Codebook<T> {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, index: usize) -> &CckCodeword<T> {
        &self.words[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &CckCodeword<T>> {
        self.words.iter()
    }

    pub fn index_of(&self, phases: CckPhases) -> usize {
        phases.index()
    }

    /// `Re⟨s, c⟩ = Σ Re(s)·Re(c) + Im(s)·Im(c)` for every codeword `c`.
    ///
    /// Each chip is `e^{jφ1}` times a φ1-free part, so the 64 sums over
    /// `(φ2, φ3, φ4)` are formed once and the four φ1 rotations read off
    /// their real and imaginary parts. Chips are exact unit phasors, so the
    /// per-chip terms are the same numbers a direct evaluation would add.
    pub fn scores(&self, chunk: &[Complex<T>; CHIPS_PER_SYMBOL]) -> [T; CODEBOOK_SIZE] {
        let mut out = [T::zero(); CODEBOOK_SIZE];
        for (inner, offsets) in self.offsets.iter().enumerate() {
            let mut g = Complex::new(T::zero(), T::zero());
            for (s, q) in chunk.iter().zip(offsets) {
                g += q.derotate(*s);
            }
            out[inner] = g.re;
            out[64 + inner] = g.im;
            out[128 + inner] = -g.re;
            out[192 + inner] = -g.im;
        }
        out
    }

    /// Highest-scoring codeword; ties go to the lowest index.
    pub fn best_match(&self, chunk: &[Complex<T>; CHIPS_PER_SYMBOL]) -> (usize, T) {
        let scores = self.scores(chunk);
        let mut best = (0, scores[0]);
        for (i, &s) in scores.iter().enumerate().skip(1) {
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    }

    /// SHA-256 over the ordered phase tuples and their chip phases; any
    /// change in ordering or spreading changes the digest.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for w in &self.words {
            h.update(w.phases.0.map(u8::from));
            for c in &w.chips {
                let q = Quadrant::ALL
                    .into_iter()
                    .find(|q| q.phasor::<T>() == *c)
                    .expect("codebook chips are QPSK phasors");
                h.update([u8::from(q)]);
            }
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct transcription of the chip formula with trig functions.
    fn spread_oracle(p: [f64; 4]) -> [Complex<f64>; 8] {
        let e = |x: f64| Complex::from_polar(1.0, x);
        let [p1, p2, p3, p4] = p;
        [
            e(p1 + p2 + p3 + p4),
            e(p1 + p3 + p4),
            e(p1 + p2 + p4),
            -e(p1 + p4),
            e(p1 + p2 + p3),
            e(p1 + p3),
            -e(p1 + p2),
            e(p1),
        ]
    }

    #[test]
    fn zero_phases() {
        let c: [Complex<f64>; 8] = cck_spread(CckPhases::default());
        let re: Vec<f64> = c.iter().map(|x| x.re).collect();
        assert_eq!(re, [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0]);
        assert!(c.iter().all(|x| x.im == 0.0));
    }

    #[test]
    fn matches_formula_for_all_tuples() {
        let book = build_codebook::<f64>();
        for (i, w) in book.iter().enumerate() {
            assert_eq!(w.phases.index(), i);
            let want = spread_oracle(w.phases.0.map(Quadrant::radians));
            for (a, b) in w.chips.iter().zip(&want) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn global_rotation_by_pi() {
        let book = build_codebook::<f64>();
        for w in book.iter() {
            let mut p = w.phases;
            p.0[0] = p.0[0] + Quadrant::PI;
            let rotated: [Complex<f64>; 8] = cck_spread(p);
            for (a, b) in rotated.iter().zip(&w.chips) {
                assert_eq!(*a, -*b);
            }
        }
    }

    #[test]
    fn non_quantized_phase_is_rejected() {
        assert!(CckPhases::from_radians([0.0, 0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn scores_agree_with_direct_correlation() {
        let book = build_codebook::<f64>();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let chunk: [Complex<f64>; 8] =
                std::array::from_fn(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let fast = book.scores(&chunk);
            for (i, w) in book.iter().enumerate() {
                let direct: f64 = chunk.iter().zip(&w.chips).map(|(s, c)| s.re * c.re + s.im * c.im).sum();
                assert!((fast[i] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn self_match_scores_eight() {
        let book = build_codebook::<f64>();
        for (k, w) in book.iter().enumerate() {
            assert_eq!(book.best_match(&w.chips), (k, 8.0));
        }
    }

    #[test]
    fn silence_resolves_to_index_zero() {
        let book = build_codebook::<f32>();
        let (i, s) = book.best_match(&[Complex::new(0.0, 0.0); 8]);
        assert_eq!((i, s), (0, 0.0));
    }

    #[test]
    fn digest_is_stable_across_scalar_types() {
        assert_eq!(build_codebook::<f32>().digest(), build_codebook::<f64>().digest());
    }
}
