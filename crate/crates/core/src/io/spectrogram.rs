use std::io::Write;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// Short-time power spectrum, rows in time, columns DC-centred in frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub frequencies_hz: Vec<f64>,
    /// First sample of each row's window.
    pub frame_starts: Vec<usize>,
    pub power_db: Vec<Vec<f64>>,
}

/// Hann-windowed STFT power in dB.
pub fn spectrogram<T: Real>(buf: &IqBuffer<T>, nfft: usize, hop: usize) -> Result<Spectrogram> {
    if !nfft.is_power_of_two() || nfft < 2 {
        return Err(Error::Domain(format!("nfft {nfft} is not a power of two")));
    }
    if hop == 0 {
        return Err(Error::Domain("hop must be at least 1".into()));
    }
    if buf.len() < nfft {
        return Err(Error::LengthMismatch {
            expected: nfft,
            actual: buf.len(),
        });
    }
    let fs = buf.sample_rate();
    let half = nfft / 2;
    let window: Vec<f64> = (0..nfft)
        .map(|n| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * n as f64 / nfft as f64).cos())
        .collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(nfft);
    let frame_starts: Vec<usize> = (0..=buf.len() - nfft).step_by(hop).collect();
    let power_db = frame_starts
        .iter()
        .map(|&start| {
            let mut x: Vec<Complex<f64>> = buf.samples()[start..start + nfft]
                .iter()
                .zip(&window)
                .map(|(s, w)| Complex::new(s.re.as_f64(), s.im.as_f64()) * w)
                .collect();
            fft.process(&mut x);
            (0..nfft)
                .map(|j| 10.0 * x[(j + half) % nfft].norm_sqr().max(1e-30).log10())
                .collect()
        })
        .collect();
    let frequencies_hz = (0..nfft).map(|j| (j as f64 - half as f64) * fs / nfft as f64).collect();
    Ok(Spectrogram {
        frequencies_hz,
        frame_starts,
        power_db,
    })
}

impl Spectrogram {
    /// Column of the strongest bin in each row.
    pub fn argmax_columns(&self) -> Vec<usize> {
        self.power_db
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, (i, &p)| if p > b.1 { (i, p) } else { b })
                    .0
            })
            .collect()
    }

    /// CSV: a header of bin frequencies in Hz, then one row per frame.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.into());
        w.write_record(self.frequencies_hz.iter().map(|f| f.to_string()))
            .map_err(io)?;
        for row in &self.power_db {
            w.write_record(row.iter().map(|p| format!("{p:.3}"))).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lora::{build_frame_waveform, LoraFrame, LoraParams};

    #[test]
    fn tone_lands_in_its_bin() {
        let fs = 1e6;
        let f0 = 187_500.0;
        let s = (0..4096)
            .map(|n| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * f0 * n as f64 / fs))
            .collect();
        let buf = IqBuffer::new(s, fs).unwrap();
        let sg = spectrogram(&buf, 64, 32).unwrap();
        let col = sg.frequencies_hz.iter().position(|&f| (f - f0).abs() < 1.0).unwrap();
        assert!(sg.argmax_columns().iter().all(|&c| c == col));
        assert_eq!(sg.power_db.len(), (4096 - 64) / 32 + 1);
    }

    #[test]
    fn preamble_ridges_rise() {
        let p = LoraParams::new(7, 1.6e6, 5).unwrap();
        let w = build_frame_waveform::<f64>(&LoraFrame::new(p, vec![]).unwrap(), 11e6).unwrap();
        let sg = spectrogram(&w.slice(0..880), 64, 16).unwrap();
        let cols = sg.argmax_columns();
        // Skip the rows straddling the wrap from +bw/2 to -bw/2.
        let rising = cols.windows(2).filter(|c| c[1] >= c[0]).count();
        assert!(rising >= cols.len() - 2, "{cols:?}");
        assert!(cols.first() < cols.last());
    }

    #[test]
    fn argument_checks() {
        let buf = IqBuffer::<f64>::zeros(100, 1e6).unwrap();
        assert!(spectrogram(&buf, 48, 1).is_err());
        assert!(spectrogram(&buf, 64, 0).is_err());
        assert!(matches!(
            spectrogram(&buf, 128, 1),
            Err(Error::LengthMismatch {
                expected: 128,
                actual: 100
            })
        ));
    }

    #[test]
    fn csv_shape() {
        let buf = IqBuffer::<f64>::zeros(256, 1e6).unwrap();
        let sg = spectrogram(&buf, 8, 64).unwrap();
        let mut out = Vec::new();
        sg.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 4);
        assert_eq!(lines[0].split(',').count(), 8);
        assert!(lines[0].starts_with("-500000"));
    }
}
