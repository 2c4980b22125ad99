use serde::{Deserialize, Serialize};

use super::emulate::{emulate_waveform, Emulation, EmulationConfig};
use crate::cck::{
    codewords_to_bytes, modulate_payload, CckPhases, Codebook, PreambleKind, WifiFramePlan, CHIPS_PER_SYMBOL,
    CHIP_RATE, MAX_PAYLOAD_BYTES,
};
use crate::error::{Error, Result};
use crate::iq::IqBuffer;
use crate::scalar::Real;

/// How frame overhead is placed relative to the emulated chip stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimelineMode {
    /// Preambles and gaps overwrite chips so every emulated chip keeps its
    /// original time; the chips they cover are never sent.
    #[default]
    Aligned,
    /// Preambles and gaps are inserted between consecutive chip segments,
    /// delaying everything that follows.
    Contiguous,
}

impl std::str::FromStr for TimelineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned" => Ok(Self::Aligned),
            "contiguous" => Ok(Self::Contiguous),
            _ => Err(Error::InvalidParams(format!(
                "unknown timeline mode {s:?} (aligned | contiguous)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    pub max_payload_bytes: usize,
    /// Payload air time per frame; overrides `max_payload_bytes` when set,
    /// though never beyond it.
    pub frame_payload_us: Option<f64>,
    pub ifs_us: f64,
    pub preamble_kind: PreambleKind,
    pub mode: TimelineMode,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            max_payload_bytes: MAX_PAYLOAD_BYTES,
            frame_payload_us: None,
            ifs_us: 12.0,
            preamble_kind: PreambleKind::Short,
            mode: TimelineMode::Aligned,
        }
    }
}

impl SegmentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_PAYLOAD_BYTES).contains(&self.max_payload_bytes) {
            return Err(Error::Domain(format!(
                "max_payload_bytes {} outside [1, {MAX_PAYLOAD_BYTES}]",
                self.max_payload_bytes
            )));
        }
        if !(self.ifs_us.is_finite() && self.ifs_us >= 0.0) {
            return Err(Error::Domain(format!("ifs_us {} must be >= 0", self.ifs_us)));
        }
        if let Some(us) = self.frame_payload_us {
            if !(us.is_finite() && us * CHIP_RATE / 1e6 >= CHIPS_PER_SYMBOL as f64 - 0.5) {
                return Err(Error::Domain(format!(
                    "frame_payload_us {us} is shorter than one CCK symbol"
                )));
            }
        }
        Ok(())
    }

    /// Payload bytes, one per CCK symbol, carried by each full frame.
    pub fn bytes_per_frame(&self) -> usize {
        let by_time = self
            .frame_payload_us
            .map(|us| ((us * CHIP_RATE / 1e6 / CHIPS_PER_SYMBOL as f64).round() as usize).max(1));
        by_time.map_or(self.max_payload_bytes, |b| b.min(self.max_payload_bytes))
    }

    pub fn ifs_samples(&self) -> usize {
        (self.ifs_us * CHIP_RATE / 1e6).round() as usize
    }

    /// Preamble plus gap, in samples.
    pub fn overhead_samples(&self) -> usize {
        self.preamble_kind.samples() + self.ifs_samples()
    }

    /// Overhead of a full frame relative to its own air time, as
    /// `(overhead / (overhead + payload), overhead / payload)`.
    pub fn steady_state_overhead(&self) -> (f64, f64) {
        let over = self.overhead_samples() as f64;
        let payload = (self.bytes_per_frame() * CHIPS_PER_SYMBOL) as f64;
        (over / (over + payload), over / payload)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    Preamble,
    Payload,
    IfsGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelineSegment {
    pub kind: SegmentKind,
    pub frame: usize,
    pub samples: usize,
    pub duration_us: f64,
}

/// Chunks of the emulated stream carried by one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSpan {
    pub chunk_start: usize,
    pub chunk_count: usize,
}

impl FrameSpan {
    pub fn chunks(&self) -> std::ops::Range<usize> {
        self.chunk_start..self.chunk_start + self.chunk_count
    }

    pub fn samples(&self) -> std::ops::Range<usize> {
        self.chunk_start * CHIPS_PER_SYMBOL..(self.chunk_start + self.chunk_count) * CHIPS_PER_SYMBOL
    }
}

/// A train of 802.11b frames carrying one emulated waveform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionPlan {
    pub frames: Vec<WifiFramePlan>,
    pub spans: Vec<FrameSpan>,
    pub timeline: Vec<TimelineSegment>,
    pub ifs_us: f64,
    pub preamble_kind: PreambleKind,
    pub mode: TimelineMode,
    /// Length in samples of the chip stream the plan was cut from.
    pub chip_stream_len: usize,
}

impl TransmissionPlan {
    pub fn total_samples(&self) -> usize {
        self.timeline.iter().map(|s| s.samples).sum()
    }

    pub fn total_duration_us(&self) -> f64 {
        samples_to_us(self.total_samples())
    }

    fn samples_of(&self, kind: SegmentKind) -> usize {
        self.timeline.iter().filter(|s| s.kind == kind).map(|s| s.samples).sum()
    }

    pub fn payload_samples(&self) -> usize {
        self.samples_of(SegmentKind::Payload)
    }

    pub fn overhead_samples(&self) -> usize {
        self.samples_of(SegmentKind::Preamble) + self.samples_of(SegmentKind::IfsGap)
    }

    /// Overhead time over total transmission time.
    pub fn distortion_fraction(&self) -> f64 {
        self.overhead_samples() as f64 / self.total_samples() as f64
    }

    /// Overhead time over payload time.
    pub fn overhead_per_payload(&self) -> f64 {
        self.overhead_samples() as f64 / self.payload_samples() as f64
    }

    /// Sample offset of each frame's preamble in the rendered transmission.
    pub fn frame_start_samples(&self) -> Vec<usize> {
        let mut at = 0;
        let mut out = Vec::with_capacity(self.frames.len());
        for seg in &self.timeline {
            if seg.kind == SegmentKind::Preamble {
                out.push(at);
            }
            at += seg.samples;
        }
        out
    }

    pub fn frame_start_us(&self) -> Vec<f64> {
        self.frame_start_samples().into_iter().map(samples_to_us).collect()
    }

    /// Position of chip 0 of the emulated stream in the rendered output when
    /// the plan is aligned.
    pub fn stream_origin(&self) -> usize {
        self.preamble_kind.samples()
    }

    /// The chip stream as far as the frames carry it: each frame's payload
    /// re-modulated at its span, zeros for chunks no frame transmits.
    pub fn chip_stream<T: Real>(&self) -> Result<IqBuffer<T>> {
        self.validate(self.chip_stream_len)?;
        let mut out = vec![num_complex::Complex::default(); self.chip_stream_len];
        for (frame, span) in self.frames.iter().zip(&self.spans) {
            let chips = modulate_payload::<T>(frame)?;
            out[span.samples()].copy_from_slice(chips.samples());
        }
        IqBuffer::new(out, CHIP_RATE)
    }

    /// Checks the structural invariants against a chip stream length.
    pub fn validate(&self, chip_stream_len: usize) -> Result<()> {
        let inconsistent = |m: String| Err(Error::Consistency(m));
        if self.frames.is_empty() {
            return inconsistent("plan has no frames".into());
        }
        if chip_stream_len != self.chip_stream_len {
            return inconsistent(format!(
                "plan cut from {} samples, chip stream has {chip_stream_len}",
                self.chip_stream_len
            ));
        }
        if self.spans.len() != self.frames.len() || self.timeline.len() != 3 * self.frames.len() {
            return inconsistent("frame, span and timeline counts disagree".into());
        }
        for (i, (frame, span)) in self.frames.iter().zip(&self.spans).enumerate() {
            frame.validate()?;
            if frame.payload.len() != span.chunk_count {
                return inconsistent(format!("frame {i}: payload and span lengths differ"));
            }
            if span.samples().end > chip_stream_len {
                return inconsistent(format!("frame {i} runs past the chip stream"));
            }
            let kinds = [SegmentKind::Preamble, SegmentKind::Payload, SegmentKind::IfsGap];
            for (seg, kind) in self.timeline[3 * i..3 * i + 3].iter().zip(kinds) {
                if seg.kind != kind || seg.frame != i {
                    return inconsistent(format!("timeline out of order at frame {i}"));
                }
            }
            if self.timeline[3 * i + 1].samples != span.chunk_count * CHIPS_PER_SYMBOL {
                return inconsistent(format!("frame {i}: payload segment length"));
            }
        }
        Ok(())
    }
}

fn samples_to_us(samples: usize) -> f64 {
    samples as f64 / CHIP_RATE * 1e6
}

fn segment(kind: SegmentKind, frame: usize, samples: usize) -> TimelineSegment {
    TimelineSegment {
        kind,
        frame,
        samples,
        duration_us: samples_to_us(samples),
    }
}

/// Chunk spans and per-frame gap lengths for a stream of `chunks` chunks.
fn layout(chunks: usize, config: &SegmentConfig) -> (Vec<FrameSpan>, Vec<usize>) {
    let per_frame = config.bytes_per_frame();
    let pre = config.preamble_kind.samples();
    let ifs = config.ifs_samples();
    let mut spans = Vec::new();
    let mut gaps = Vec::new();
    match config.mode {
        TimelineMode::Contiguous => {
            let mut start = 0;
            while start < chunks {
                let count = per_frame.min(chunks - start);
                spans.push(FrameSpan {
                    chunk_start: start,
                    chunk_count: count,
                });
                gaps.push(ifs);
                start += count;
            }
        }
        TimelineMode::Aligned => {
            // Frame k starts at chunk round(k·period); the overhead between
            // frames is therefore a whole number of chunks and the gap
            // absorbs the rounding (at most 4 samples either way).
            let period = per_frame as f64 + (pre + ifs) as f64 / CHIPS_PER_SYMBOL as f64;
            let start_of = |k: usize| (k as f64 * period).round() as usize;
            let mut k = 0;
            while start_of(k) < chunks {
                let start = start_of(k);
                let count = per_frame.min(chunks - start);
                spans.push(FrameSpan {
                    chunk_start: start,
                    chunk_count: count,
                });
                let next = start_of(k + 1);
                gaps.push(if next < chunks {
                    (next - start - count) * CHIPS_PER_SYMBOL - pre
                } else {
                    // The last gap runs at least to the end of the stream so
                    // the timeline spans the whole target.
                    ifs.max((chunks - start - count) * CHIPS_PER_SYMBOL)
                });
                k += 1;
            }
        }
    }
    (spans, gaps)
}

/// Cuts an emulated chip stream into a train of frames.
///
/// The differential φ1 state runs on across frames; the scrambler restarts
/// in each one. In aligned mode the chips under later preambles and gaps are
/// dropped, so payloads no longer concatenate to the whole stream.
pub fn segment_emulation<T: Real>(emulation: &Emulation<T>, config: &SegmentConfig) -> Result<TransmissionPlan> {
    config.validate()?;
    let phases = emulation.phases();
    let (spans, gaps) = layout(phases.len(), config);
    let mut frames = Vec::with_capacity(spans.len());
    let mut timeline = Vec::with_capacity(3 * spans.len());
    // In aligned mode the skipped chunks still advance the reference phase,
    // which keeps every transmitted chunk identical to its emulated chips.
    let mut reference = emulation.config.reference_phase;
    let mut consumed = 0;
    for (i, (span, &gap)) in spans.iter().zip(&gaps).enumerate() {
        if let Some(last) = phases[consumed..span.chunk_start].last() {
            reference = last.phi1();
        }
        let chunk_phases: &[CckPhases] = &phases[span.chunks()];
        let (payload, last) = codewords_to_bytes(chunk_phases, emulation.config.scrambler, reference);
        frames.push(WifiFramePlan {
            payload,
            preamble_kind: config.preamble_kind,
            scrambler: emulation.config.scrambler,
            reference_phase: reference,
        });
        reference = last;
        consumed = span.chunks().end;
        timeline.push(segment(SegmentKind::Preamble, i, config.preamble_kind.samples()));
        timeline.push(segment(SegmentKind::Payload, i, span.chunk_count * CHIPS_PER_SYMBOL));
        timeline.push(segment(SegmentKind::IfsGap, i, gap));
    }
    Ok(TransmissionPlan {
        frames,
        spans,
        timeline,
        ifs_us: config.ifs_us,
        preamble_kind: config.preamble_kind,
        mode: config.mode,
        chip_stream_len: emulation.emulated.len(),
    })
}

/// Emulates `target` and segments the result in one step.
pub fn segment_transmission<T: Real>(
    target: &IqBuffer<T>,
    codebook: &Codebook<T>,
    emulation: EmulationConfig,
    config: &SegmentConfig,
) -> Result<(Emulation<T>, TransmissionPlan)> {
    config.validate()?;
    let emulated = emulate_waveform(target, codebook, emulation)?;
    let mut plan_emulation = emulated;
    let plan = segment_emulation(&plan_emulation, config)?;
    plan_emulation.report.distortion_fraction = plan.distortion_fraction();
    Ok((plan_emulation, plan))
}
