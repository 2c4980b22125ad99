use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::awgn::awgn;
use super::demod::Dechirper;
use crate::error::Result;
use crate::lora::{modulate_symbol, ChirpDirection, LoraParams};
use crate::scalar::Real;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Fraction of `trials` random symbols misread at `snr_db`, with symbol
/// timing known. Each trial draws its symbol and noise from its own stream,
/// so the result does not depend on scheduling.
pub fn symbol_error_rate<T: Real>(params: &LoraParams, fs: f64, snr_db: f64, trials: usize, seed: u64) -> Result<f64> {
    let engine = Dechirper::<T>::new(params, fs)?;
    let m = params.chips_per_symbol();
    let errors = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let mut rng = trial_rng(seed, t);
            let value = rng.random_range(0..m);
            let clean = modulate_symbol::<T>(value, params, fs)?;
            let noisy = awgn(&clean, snr_db, rng.random())?;
            Ok(usize::from(
                engine.peak(noisy.samples(), ChirpDirection::Up).bin != value,
            ))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(errors as f64 / trials.max(1) as f64)
}

/// Lowest grid SNR from which every higher grid point keeps the symbol
/// error rate at or below `max_ser`; `None` if even the highest fails.
pub fn min_snr_for_ser<T: Real>(
    params: &LoraParams,
    fs: f64,
    max_ser: f64,
    grid_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let mut grid = grid_db.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut best = None;
    for &snr in grid.iter().rev() {
        if symbol_error_rate::<T>(params, fs, snr, trials, seed)? > max_ser {
            break;
        }
        best = Some(snr);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_channel_has_no_errors() {
        let p = LoraParams::new(7, 1.6e6, 5).unwrap();
        assert_eq!(symbol_error_rate::<f64>(&p, 11e6, 30.0, 50, 1).unwrap(), 0.0);
    }

    #[test]
    fn very_low_snr_is_mostly_wrong() {
        let p = LoraParams::new(5, 1.6e6, 5).unwrap();
        assert!(symbol_error_rate::<f64>(&p, 11e6, -30.0, 100, 1).unwrap() > 0.8);
    }

    #[test]
    fn threshold_search_is_monotone_in_spreading_factor() {
        let grid: Vec<f64> = (-30..=10).step_by(2).map(f64::from).collect();
        let p7 = LoraParams::new(7, 1.6e6, 5).unwrap();
        let p9 = LoraParams::new(9, 1.6e6, 5).unwrap();
        let a = min_snr_for_ser::<f32>(&p7, 11e6, 0.01, &grid, 100, 5).unwrap().unwrap();
        let b = min_snr_for_ser::<f32>(&p9, 11e6, 0.01, &grid, 100, 5).unwrap().unwrap();
        assert!(b < a, "sf9 {b} vs sf7 {a}");
    }

    #[test]
    fn deterministic() {
        let p = LoraParams::new(6, 1.6e6, 5).unwrap();
        let a = symbol_error_rate::<f64>(&p, 11e6, -8.0, 64, 3).unwrap();
        let b = symbol_error_rate::<f64>(&p, 11e6, -8.0, 64, 3).unwrap();
        assert_eq!(a, b);
    }
}
