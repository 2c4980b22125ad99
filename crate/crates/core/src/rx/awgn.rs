use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// Adds circularly-symmetric complex Gaussian noise at `snr_db` relative to
/// the mean power of the non-silent samples. `f64::INFINITY` adds nothing.
pub fn awgn<T: Real>(buf: &IqBuffer<T>, snr_db: f64, seed: u64) -> Result<IqBuffer<T>> {
    if buf.is_empty() {
        return Err(Error::Domain("cannot add noise to an empty buffer".into()));
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("snr {snr_db} dB")));
    }
    if snr_db == f64::INFINITY {
        return Ok(buf.clone());
    }
    let (power, active) = buf
        .samples()
        .iter()
        .map(|s| s.norm_sqr().as_f64())
        .filter(|&p| p > 0.0)
        .fold((0.0, 0usize), |(sum, n), p| (sum + p, n + 1));
    if active == 0 {
        return Ok(buf.clone());
    }
    let noise_var = power / active as f64 / 10f64.powf(snr_db / 10.0);
    let sigma = (noise_var / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = buf
        .samples()
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex::new(T::of(sigma * re), T::of(sigma * im))
        })
        .collect();
    Ok(IqBuffer::from_parts(samples, buf.sample_rate()))
}
