//! JSON reports. Every document carries `schema_version` and `command`;
//! `schemas/report.schema.json` describes them.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cck_lora::cck::PreambleKind;
use cck_lora::emulator::{EmulationReport, PreambleRender, TimelineMode};
use cck_lora::lora::LoraParams;
use cck_lora::rx::RxResult;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Serialize)]
struct Envelope<'a, B> {
    schema_version: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a B,
}

pub fn to_json<B: Serialize>(command: &str, body: &B) -> Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    };
    Ok(serde_json::to_string_pretty(&env)? + "\n")
}

pub fn write<B: Serialize>(path: Option<&Path>, command: &str, body: &B) -> Result<()> {
    let text = to_json(command, body)?;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct SynthReport {
    pub params: LoraParams,
    pub sample_rate_hz: f64,
    pub samples: usize,
    pub duration_s: f64,
    pub payload_hex: String,
    pub symbols: Vec<u32>,
    pub payload_start_sample: usize,
    pub output: PathBuf,
}

#[derive(Serialize)]
pub struct EmulateReportBody {
    pub input: PathBuf,
    pub sample_rate_hz: f64,
    pub codebook_size: usize,
    pub codebook_digest: String,
    #[serde(flatten)]
    pub emulation: EmulationReport,
    pub payload_bytes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inband_evm_snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_drop_db: Option<f64>,
}

#[derive(Serialize)]
pub struct SegmentReport {
    pub input: PathBuf,
    pub plan: PathBuf,
    pub frames: usize,
    pub mode: TimelineMode,
    pub preamble_kind: PreambleKind,
    pub ifs_us: f64,
    pub bytes_per_frame: usize,
    pub chunk_count: usize,
    pub evm_snr_db: f64,
    pub total_duration_us: f64,
    pub payload_duration_us: f64,
    pub distortion_fraction: f64,
    pub overhead_per_payload: f64,
}

#[derive(Serialize)]
pub struct RenderReport {
    pub plan: PathBuf,
    pub output: PathBuf,
    pub frames: usize,
    pub samples: usize,
    pub duration_us: f64,
    pub stream_origin: usize,
    pub preamble_render: PreambleRender,
}

#[derive(Serialize)]
pub struct DemodReport {
    pub input: PathBuf,
    pub params: LoraParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    #[serde(flatten)]
    pub rx: RxResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload_matches: Option<bool>,
}

#[derive(Serialize)]
pub struct EvmReport {
    pub ideal: PathBuf,
    pub actual: PathBuf,
    pub offset: usize,
    pub samples: usize,
    pub evm_snr_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inband_evm_snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_drop_db: Option<f64>,
}

#[derive(Serialize)]
pub struct SpectrogramReport {
    pub input: PathBuf,
    pub output: PathBuf,
    pub nfft: usize,
    pub hop: usize,
    pub rows: usize,
}

#[derive(Serialize)]
pub struct PcapReport {
    pub plan: PathBuf,
    pub output: PathBuf,
    pub records: usize,
    pub channel: u8,
    pub frequency_mhz: u16,
    pub first_timestamp_us: u64,
    pub last_timestamp_us: u64,
}

#[derive(Serialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub message: String,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorDetail,
    pub exit_code: i32,
}
