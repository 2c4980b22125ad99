//! LoRa-over-CCK emulation: nearest-codeword matching, payload inversion,
//! multi-frame segmentation and rendering of the as-transmitted signal.

mod emulate;
mod render;
mod segment;

pub use emulate::{emulate_waveform, match_chunk, Emulation, EmulationConfig, EmulationReport};
pub use render::{render_transmission, PreambleRender};
pub use segment::{
    segment_emulation, segment_transmission, FrameSpan, SegmentConfig, SegmentKind, TimelineMode, TimelineSegment,
    TransmissionPlan,
};
