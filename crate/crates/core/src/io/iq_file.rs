use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// Metadata stored next to a raw IQ file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub sample_rate_hz: f64,
}

/// `capture.iq` → `capture.iq.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes interleaved little-endian `f32` I/Q pairs plus the sidecar.
pub fn write_iq<T: Real>(buf: &IqBuffer<T>, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for s in buf.samples() {
        out.write_all(&(s.re.as_f64() as f32).to_le_bytes())?;
        out.write_all(&(s.im.as_f64() as f32).to_le_bytes())?;
    }
    out.flush()?;
    let meta = Sidecar {
        sample_rate_hz: buf.sample_rate(),
    };
    let mut side = BufWriter::new(File::create(sidecar_path(path))?);
    serde_json::to_writer_pretty(&mut side, &meta)?;
    side.write_all(b"\n")?;
    side.flush()?;
    Ok(())
}

/// Reads a raw IQ file. `sample_rate` overrides the sidecar and is required
/// when there is none.
pub fn read_iq<T: Real>(path: &Path, sample_rate: Option<f64>) -> Result<IqBuffer<T>> {
    let format = |reason: String| Error::Format {
        path: path.to_owned(),
        reason,
    };
    let rate = match sample_rate {
        Some(rate) => rate,
        None => {
            let side = sidecar_path(path);
            if !side.exists() {
                return Err(Error::MissingSidecar(side));
            }
            let meta: Sidecar =
                serde_json::from_reader(BufReader::new(File::open(&side)?)).map_err(|e| Error::Format {
                    path: side.clone(),
                    reason: e.to_string(),
                })?;
            meta.sample_rate_hz
        }
    };
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() % 4 != 0 {
        return Err(format(format!("{} bytes is not a whole number of floats", bytes.len())));
    }
    if bytes.len() % 8 != 0 {
        return Err(format(format!("{} floats cannot form I/Q pairs", bytes.len() / 4)));
    }
    let value = |b: &[u8]| f32::from_le_bytes(b.try_into().expect("4-byte slice"));
    let samples: Vec<Complex<T>> = bytes
        .chunks_exact(8)
        .map(|c| Complex::new(T::of(f64::from(value(&c[..4]))), T::of(f64::from(value(&c[4..])))))
        .collect();
    IqBuffer::new(samples, rate).map_err(|e| match e {
        Error::InvalidSampleRate(_) => e,
        other => format(other.to_string()),
    })
}
