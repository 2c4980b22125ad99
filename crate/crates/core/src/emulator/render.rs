use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::segment::{SegmentKind, TransmissionPlan};
use crate::cck::{plcp_waveform, CHIP_RATE};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// What fills the preamble segments of a rendered transmission.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreambleRender {
    /// The DBPSK/DQPSK PLCP preamble and header actually sent.
    #[default]
    Waveform,
    /// Silence of the same duration.
    Zeros,
}

/// The signal on air for `plan`: each frame's PLCP preamble, its chip
/// segment, then silence for the inter-frame gap.
pub fn render_transmission<T: Real>(
    plan: &TransmissionPlan,
    emulated_chips: &IqBuffer<T>,
    preamble: PreambleRender,
) -> Result<IqBuffer<T>> {
    if (emulated_chips.sample_rate() - CHIP_RATE).abs() > 1e-6 {
        return Err(Error::InvalidSampleRate(format!(
            "chip stream at {} Hz, expected {CHIP_RATE}",
            emulated_chips.sample_rate()
        )));
    }
    plan.validate(emulated_chips.len())?;
    let chips = emulated_chips.samples();
    let mut out: Vec<Complex<T>> = Vec::with_capacity(plan.total_samples());
    for seg in &plan.timeline {
        let frame = &plan.frames[seg.frame];
        match seg.kind {
            SegmentKind::Preamble => match preamble {
                PreambleRender::Waveform => {
                    out.extend_from_slice(plcp_waveform::<T>(frame.preamble_kind, frame.payload.len()).samples())
                }
                PreambleRender::Zeros => out.resize(out.len() + seg.samples, Complex::default()),
            },
            SegmentKind::Payload => {
                out.extend_from_slice(&chips[plan.spans[seg.frame].samples()]);
            }
            SegmentKind::IfsGap => out.resize(out.len() + seg.samples, Complex::default()),
        }
    }
    debug_assert_eq!(out.len(), plan.total_samples());
    Ok(IqBuffer::from_parts(out, CHIP_RATE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cck::{build_codebook, PreambleKind};
    use crate::emulator::{segment_transmission, EmulationConfig, SegmentConfig, TimelineMode};

    fn target(len: usize) -> IqBuffer<f64> {
        let s = (0..len)
            .map(|n| Complex::from_polar(1.0, 0.011 * (n * n % 9973) as f64))
            .collect();
        IqBuffer::new(s, CHIP_RATE).unwrap()
    }

    #[test]
    fn single_frame_with_silent_preamble() {
        let t = target(4000);
        let (e, plan) = segment_transmission(
            &t,
            &build_codebook(),
            EmulationConfig::default(),
            &SegmentConfig::default(),
        )
        .unwrap();
        let out = render_transmission(&plan, &e.emulated, PreambleRender::Zeros).unwrap();
        let pre = PreambleKind::Short.samples();
        assert!(out.samples()[..pre].iter().all(|s| s.norm() == 0.0));
        assert_eq!(&out.samples()[pre..pre + 4000], e.emulated.samples());
        assert_eq!(out.len(), plan.total_samples());
    }

    #[test]
    fn preamble_waveform_is_rendered() {
        let t = target(800);
        let (e, plan) = segment_transmission(
            &t,
            &build_codebook(),
            EmulationConfig::default(),
            &SegmentConfig::default(),
        )
        .unwrap();
        let out = render_transmission(&plan, &e.emulated, PreambleRender::Waveform).unwrap();
        let expected = plcp_waveform::<f64>(PreambleKind::Short, 100);
        assert_eq!(&out.samples()[..1056], expected.samples());
        assert!(out.samples()[1056 + 800..].iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn stream_length_mismatch_is_a_consistency_error() {
        let t = target(1600);
        let (e, plan) = segment_transmission(
            &t,
            &build_codebook(),
            EmulationConfig::default(),
            &SegmentConfig::default(),
        )
        .unwrap();
        let short = e.emulated.slice(0..800);
        assert!(matches!(
            render_transmission(&plan, &short, PreambleRender::Waveform),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn aligned_render_keeps_chip_timing() {
        let t = target(40_000);
        let config = SegmentConfig {
            max_payload_bytes: 700,
            mode: TimelineMode::Aligned,
            ..SegmentConfig::default()
        };
        let (e, plan) = segment_transmission(&t, &build_codebook(), EmulationConfig::default(), &config).unwrap();
        let out = render_transmission(&plan, &e.emulated, PreambleRender::Waveform).unwrap();
        let origin = plan.stream_origin();
        for span in &plan.spans {
            let r = span.samples();
            assert_eq!(
                &out.samples()[origin + r.start..origin + r.end],
                &e.emulated.samples()[r]
            );
        }
    }
}
