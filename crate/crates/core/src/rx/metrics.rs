use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// Value reported when ideal and actual agree up to a complex scale.
pub const EVM_SNR_CAP_DB: f64 = 80.0;

fn check_pair<T: Real>(ideal: &IqBuffer<T>, actual: &IqBuffer<T>) -> Result<()> {
    if ideal.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: ideal.len(),
            actual: actual.len(),
        });
    }
    if ideal.sample_rate() != actual.sample_rate() {
        return Err(Error::InvalidSampleRate(format!(
            "{} Hz vs {} Hz",
            ideal.sample_rate(),
            actual.sample_rate()
        )));
    }
    Ok(())
}

/// Ratio of the part of `actual` explained by `ideal` to the rest:
/// `10·log10(|α|²·Σ|ideal|² / Σ|actual − α·ideal|²)`, with `α` the
/// least-squares complex gain from `ideal` to `actual`. Invariant to any
/// complex scaling of `actual`; clamped to `±EVM_SNR_CAP_DB`.
pub fn evm_snr<T: Real>(ideal: &IqBuffer<T>, actual: &IqBuffer<T>) -> Result<f64> {
    check_pair(ideal, actual)?;
    let widen = |c: &Complex<T>| Complex::new(c.re.as_f64(), c.im.as_f64());
    let mut cross = Complex::new(0.0, 0.0);
    let mut ideal_energy = 0.0;
    for (i, a) in ideal.samples().iter().zip(actual.samples()) {
        let (i, a) = (widen(i), widen(a));
        cross += i.conj() * a;
        ideal_energy += i.norm_sqr();
    }
    if ideal_energy == 0.0 {
        return Err(Error::Domain("reference signal has no energy".into()));
    }
    let alpha = cross / ideal_energy;
    let signal = alpha.norm_sqr() * ideal_energy;
    let error: f64 = ideal
        .samples()
        .iter()
        .zip(actual.samples())
        .map(|(i, a)| (widen(a) - alpha * widen(i)).norm_sqr())
        .sum();
    if signal <= 0.0 {
        return Ok(-EVM_SNR_CAP_DB);
    }
    if error <= 0.0 {
        return Ok(EVM_SNR_CAP_DB);
    }
    Ok((10.0 * (signal / error).log10()).clamp(-EVM_SNR_CAP_DB, EVM_SNR_CAP_DB))
}

fn spectrum<T: Real>(buf: &IqBuffer<T>) -> Vec<Complex<f64>> {
    let mut x: Vec<Complex<f64>> = buf
        .samples()
        .iter()
        .map(|c| Complex::new(c.re.as_f64(), c.im.as_f64()))
        .collect();
    if !x.is_empty() {
        FftPlanner::new().plan_fft_forward(x.len()).process(&mut x);
    }
    x
}

fn bin_frequency(k: usize, len: usize, fs: f64) -> f64 {
    let k = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
    k * fs / len as f64
}

/// Ideal brick-wall low-pass: zeroes every DFT bin above `half_bw` Hz.
pub fn band_limit<T: Real>(buf: &IqBuffer<T>, half_bw: f64) -> IqBuffer<T> {
    let len = buf.len();
    let fs = buf.sample_rate();
    let mut x = spectrum(buf);
    for (k, v) in x.iter_mut().enumerate() {
        if bin_frequency(k, len, fs).abs() > half_bw {
            *v = Complex::new(0.0, 0.0);
        }
    }
    if len > 0 {
        FftPlanner::new().plan_fft_inverse(len).process(&mut x);
    }
    let scale = 1.0 / len.max(1) as f64;
    let samples = x
        .into_iter()
        .map(|c| Complex::new(T::of(c.re * scale), T::of(c.im * scale)))
        .collect();
    IqBuffer::from_parts(samples, fs)
}

/// Share of the buffer's energy at frequencies within `±half_bw`.
pub fn band_energy_fraction<T: Real>(buf: &IqBuffer<T>, half_bw: f64) -> f64 {
    let len = buf.len();
    let x = spectrum(buf);
    let (inside, total) = x.iter().enumerate().fold((0.0, 0.0), |(i, t), (k, v)| {
        let p = v.norm_sqr();
        if bin_frequency(k, len, buf.sample_rate()).abs() <= half_bw {
            (i + p, t + p)
        } else {
            (i, t + p)
        }
    });
    if total == 0.0 {
        0.0
    } else {
        inside / total
    }
}

/// EVM-SNR restricted to the LoRa band `±bw/2`, which is what a LoRa
/// receiver's channel filter lets through.
pub fn inband_evm_snr<T: Real>(ideal: &IqBuffer<T>, actual: &IqBuffer<T>, bw: f64) -> Result<f64> {
    check_pair(ideal, actual)?;
    evm_snr(&band_limit(ideal, bw / 2.0), &band_limit(actual, bw / 2.0))
}

/// Demodulation floor: SNR a LoRa receiver needs at each spreading factor,
/// -2.5 dB at SF5 falling 2.5 dB per step to -20 dB at SF12.
pub fn demod_floor_db(sf: u8) -> f64 {
    -2.5 * (f64::from(sf) - 4.0)
}

/// Drop of receiver-reported SNR caused by emulation error, for a receiver
/// at its demodulation floor.
///
/// The emulated signal has the ideal's power, split into a coherent part
/// `s/(1+s)` and in-band distortion `1/(1+s)` where `s` is the in-band
/// EVM-SNR. With channel noise at `1/ρ` (ρ the floor), the reported SNR
/// falls from `ρ` to `(s/(1+s)) / (1/ρ + 1/(1+s))`, a drop of
/// `10·log10((1 + s + ρ)/s)`.
pub fn snr_drop_db(inband_evm_snr_db: f64, sf: u8) -> f64 {
    let s = 10f64.powf(inband_evm_snr_db / 10.0);
    let rho = 10f64.powf(demod_floor_db(sf) / 10.0);
    10.0 * ((1.0 + s + rho) / s).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rx::awgn;

    fn signal(len: usize) -> IqBuffer<f64> {
        let s = (0..len)
            .map(|n| Complex::from_polar(1.0, 0.3 * n as f64 + 1e-3 * (n * n) as f64))
            .collect();
        IqBuffer::new(s, 1e6).unwrap()
    }

    #[test]
    fn identical_is_capped() {
        let s = signal(1000);
        assert_eq!(evm_snr(&s, &s).unwrap(), EVM_SNR_CAP_DB);
    }

    #[test]
    fn complex_scale_is_absorbed() {
        let s = signal(1000);
        let scaled: Vec<_> = s.samples().iter().map(|c| c * Complex::new(2.0, -1.5)).collect();
        let scaled = IqBuffer::new(scaled, 1e6).unwrap();
        assert!(evm_snr(&s, &scaled).unwrap() > 79.0);
        let noisy = awgn(&s, 15.0, 2).unwrap();
        let scaled: Vec<_> = noisy.samples().iter().map(|c| c * Complex::new(0.0, 3.0)).collect();
        let a = evm_snr(&s, &noisy).unwrap();
        let b = evm_snr(&s, &IqBuffer::new(scaled, 1e6).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn injected_noise_is_measured() {
        let s = signal(100_000);
        let noisy = awgn(&s, 10.0, 11).unwrap();
        let v = evm_snr(&s, &noisy).unwrap();
        assert!((v - 10.0).abs() < 0.3, "{v}");
    }

    #[test]
    fn unrelated_signals_hit_the_floor() {
        let s = signal(100);
        let z = IqBuffer::zeros(100, 1e6).unwrap();
        assert_eq!(evm_snr(&s, &z).unwrap(), -EVM_SNR_CAP_DB);
        // Orthogonal to the reference: nothing of it survives.
        let mut a = vec![Complex::new(0.0, 0.0); 100];
        let mut b = vec![Complex::new(0.0, 0.0); 100];
        a[0] = Complex::new(1.0, 0.0);
        b[1] = Complex::new(1.0, 0.0);
        let (a, b) = (IqBuffer::new(a, 1e6).unwrap(), IqBuffer::new(b, 1e6).unwrap());
        assert_eq!(evm_snr(&a, &b).unwrap(), -EVM_SNR_CAP_DB);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            evm_snr(&signal(10), &signal(11)),
            Err(Error::LengthMismatch {
                expected: 10,
                actual: 11
            })
        ));
    }

    #[test]
    fn band_limit_keeps_in_band_tone_and_drops_others() {
        let fs = 1e6;
        let n = 1000;
        let tone = |f: f64| -> Vec<Complex<f64>> {
            (0..n)
                .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * f * k as f64 / fs))
                .collect()
        };
        let low = IqBuffer::new(tone(10e3), fs).unwrap();
        let high = IqBuffer::new(tone(-300e3), fs).unwrap();
        let mixed: Vec<_> = low.samples().iter().zip(high.samples()).map(|(a, b)| a + b).collect();
        let mixed = IqBuffer::new(mixed, fs).unwrap();
        let filtered = band_limit(&mixed, 100e3);
        assert!(evm_snr(&low, &filtered).unwrap() > 70.0);
        assert!((band_energy_fraction(&mixed, 100e3) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn drop_shrinks_with_spreading_factor_and_fidelity() {
        assert_eq!(demod_floor_db(5), -2.5);
        assert_eq!(demod_floor_db(12), -20.0);
        assert!(snr_drop_db(10.0, 12) < snr_drop_db(10.0, 5));
        assert!(snr_drop_db(15.0, 5) < snr_drop_db(10.0, 5));
        assert!(snr_drop_db(80.0, 5) < 1e-6);
        // s = 1, rho = 1 (0 dB floor would be SF4): (1 + 1 + 1)/1.
        let s = 0.0;
        let expected = 10.0 * (1.0 + 1.0 + 10f64.powf(-0.25)).log10();
        assert!((snr_drop_db(s, 5) - expected).abs() < 1e-12);
    }
}
