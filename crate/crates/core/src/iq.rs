use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex baseband samples tagged with their sample rate in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct IqBuffer<T> {
    samples: Vec<Complex<T>>,
    sample_rate: f64,
}

impl<T: Real> IqBuffer<T> {
    pub fn new(samples: Vec<Complex<T>>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSampleRate(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::Domain(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, sample_rate })
    }

    /// Construction for samples produced by this crate's own synthesis,
    /// which are finite by construction.
    pub(crate) fn from_parts(samples: Vec<Complex<T>>, sample_rate: f64) -> Self {
        debug_assert!(sample_rate > 0.0);
        Self { samples, sample_rate }
    }

    pub fn zeros(len: usize, sample_rate: f64) -> Result<Self> {
        Self::new(vec![Complex::new(T::zero(), T::zero()); len], sample_rate)
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn energy(&self) -> T {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Copy of `self` with its samples converted to another scalar type.
    pub fn cast<U: Real>(&self) -> IqBuffer<U> {
        IqBuffer {
            samples: self
                .samples
                .iter()
                .map(|s| Complex::new(U::of(s.re.as_f64()), U::of(s.im.as_f64())))
                .collect(),
            sample_rate: self.sample_rate,
        }
    }

    /// Zero-pads at the end to `len` samples; no-op if already longer.
    pub fn padded_to(&self, len: usize) -> Self {
        let mut samples = self.samples.clone();
        if samples.len() < len {
            samples.resize(len, Complex::new(T::zero(), T::zero()));
        }
        Self::from_parts(samples, self.sample_rate)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_parts(self.samples[range].to_vec(), self.sample_rate)
    }

    /// Prepends `count` zero samples.
    pub fn delayed(&self, count: usize) -> Self {
        let mut samples = vec![Complex::new(T::zero(), T::zero()); count];
        samples.extend_from_slice(&self.samples);
        Self::from_parts(samples, self.sample_rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_rate() {
        assert!(IqBuffer::<f64>::new(vec![], 0.0).is_err());
        assert!(IqBuffer::<f64>::new(vec![], -1.0).is_err());
        assert!(IqBuffer::<f64>::new(vec![], f64::NAN).is_err());
    }

    #[test]
    fn rejects_non_finite_samples() {
        let err = IqBuffer::new(vec![Complex::new(1.0, f64::INFINITY)], 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn padding_and_delay() {
        let b = IqBuffer::new(vec![Complex::new(1.0f32, 0.0); 3], 2.0).unwrap();
        assert_eq!(b.padded_to(8).len(), 8);
        assert_eq!(b.padded_to(2).len(), 3);
        let d = b.delayed(2);
        assert_eq!(d.len(), 5);
        assert_eq!(d.samples()[1], Complex::new(0.0, 0.0));
        assert_eq!(d.samples()[2], Complex::new(1.0, 0.0));
        assert!((b.duration() - 1.5).abs() < 1e-15);
    }
}
