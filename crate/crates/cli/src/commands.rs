use std::path::Path;

use anyhow::{Context, Result};
use cck_lora::cck::{build_codebook, PreambleKind, Quadrant, ScramblerConfig};
use cck_lora::emulator::{
    emulate_waveform, render_transmission, segment_emulation, EmulationConfig, PreambleRender, SegmentConfig,
    TimelineMode, TransmissionPlan,
};
use cck_lora::io::{export_pcap, pcap_records, read_iq, spectrogram, write_iq, PcapOptions};
use cck_lora::lora::{build_frame_waveform, encode_payload, FrameLayout, LoraFrame, LoraParams};
use cck_lora::rx::{awgn, evm_snr, inband_evm_snr, receive, snr_drop_db};
use cck_lora::Iq64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::*;
use crate::report::{self, *};
use crate::UsageError;

fn lora_params(args: &LoraArgs, payload_len: usize) -> Result<LoraParams> {
    Ok(LoraParams::new(args.sf, args.bw, args.cr)?
        .with_preamble_len(args.preamble_len)?
        .with_sync_word([args.sync_word[0], args.sync_word[1]])?
        .with_payload_len(payload_len)?)
}

fn parse_hex(flag: &str, text: &str) -> Result<Vec<u8>> {
    hex::decode(text.trim()).map_err(|e| UsageError(format!("--{flag}: {e}")).into())
}

fn emulation_config(args: &ScramblerArgs) -> Result<EmulationConfig> {
    Ok(EmulationConfig {
        scrambler: ScramblerConfig {
            enabled: !args.no_scramble,
            seed: args.scrambler_seed,
        },
        reference_phase: Quadrant::new(args.reference_phase)?,
    })
}

fn read_input(input: &InputArgs) -> Result<Iq64> {
    read_iq(&input.input, input.fs).with_context(|| format!("reading {}", input.input.display()))
}

fn read_plan(path: &Path) -> Result<TransmissionPlan> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let plan: TransmissionPlan = serde_json::from_str(&text).map_err(|e| cck_lora::Error::Format {
        path: path.to_owned(),
        reason: e.to_string(),
    })?;
    plan.validate(plan.chip_stream_len)?;
    Ok(plan)
}

pub fn lora_synth(args: &SynthArgs, seed: u64) -> Result<()> {
    let payload = match (&args.payload_hex, args.payload_len) {
        (Some(h), _) => parse_hex("payload-hex", h)?,
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.random()).collect()
        }
        (None, None) => unreachable!("clap requires one payload source"),
    };
    let params = lora_params(&args.lora, payload.len())?;
    let symbols = encode_payload(&payload, &params)?;
    let frame = LoraFrame::new(params, payload.clone())?;
    let wave: Iq64 = build_frame_waveform(&frame, args.fs)?;
    let total = args.lead + wave.len() + args.trail;
    let wave = wave.delayed(args.lead).padded_to(total);
    write_iq(&wave, &args.output)?;
    let layout = FrameLayout::new(&params, args.fs);
    report::write(
        args.report.as_deref(),
        "lora-synth",
        &SynthReport {
            params,
            sample_rate_hz: args.fs,
            samples: wave.len(),
            duration_s: wave.duration(),
            payload_hex: hex::encode(&payload),
            symbols,
            payload_start_sample: args.lead + layout.payload_start(),
            output: args.output.clone(),
        },
    )
}

pub fn emulate(args: &EmulateArgs) -> Result<()> {
    let target = read_input(&args.input)?;
    let book = build_codebook::<f64>();
    let e = emulate_waveform(&target, &book, emulation_config(&args.scrambler)?)?;
    if let Some(out) = &args.output {
        write_iq(&e.emulated, out)?;
    }
    if let Some(out) = &args.payload_out {
        std::fs::write(out, &e.payload).with_context(|| format!("writing {}", out.display()))?;
    }
    let (inband, drop) = match (args.sf, args.bw) {
        (Some(sf), Some(bw)) => {
            let ideal = target.padded_to(e.emulated.len());
            let s = inband_evm_snr(&ideal, &e.emulated, bw)?;
            (Some(s), Some(snr_drop_db(s, sf)))
        }
        _ => (None, None),
    };
    report::write(
        args.report.as_deref(),
        "emulate",
        &EmulateReportBody {
            input: args.input.input.clone(),
            sample_rate_hz: target.sample_rate(),
            codebook_size: book.len(),
            codebook_digest: book.digest(),
            payload_bytes: e.payload.len(),
            emulation: e.report,
            inband_evm_snr_db: inband,
            snr_drop_db: drop,
        },
    )
}

pub fn segment(args: &SegmentArgs) -> Result<()> {
    let target = read_input(&args.input)?;
    let config = SegmentConfig {
        max_payload_bytes: args.max_payload_bytes,
        frame_payload_us: args.frame_payload_us,
        ifs_us: args.ifs_us,
        preamble_kind: match args.preamble {
            PreambleArg::Short => PreambleKind::Short,
            PreambleArg::Long => PreambleKind::Long,
        },
        mode: match args.mode {
            ModeArg::Aligned => TimelineMode::Aligned,
            ModeArg::Contiguous => TimelineMode::Contiguous,
        },
    };
    config.validate()?;
    let e = emulate_waveform(&target, &build_codebook::<f64>(), emulation_config(&args.scrambler)?)?;
    let plan = segment_emulation(&e, &config)?;
    std::fs::write(&args.plan, serde_json::to_string_pretty(&plan)? + "\n")
        .with_context(|| format!("writing {}", args.plan.display()))?;
    if let Some(out) = &args.output {
        write_iq(&e.emulated, out)?;
    }
    report::write(
        args.report.as_deref(),
        "segment",
        &SegmentReport {
            input: args.input.input.clone(),
            plan: args.plan.clone(),
            frames: plan.frames.len(),
            mode: plan.mode,
            preamble_kind: plan.preamble_kind,
            ifs_us: plan.ifs_us,
            bytes_per_frame: config.bytes_per_frame(),
            chunk_count: e.report.chunk_count,
            evm_snr_db: e.report.evm_snr_db,
            total_duration_us: plan.total_duration_us(),
            payload_duration_us: plan.payload_samples() as f64 / 11.0,
            distortion_fraction: plan.distortion_fraction(),
            overhead_per_payload: plan.overhead_per_payload(),
        },
    )
}

pub fn render(args: &RenderArgs) -> Result<()> {
    let plan = read_plan(&args.plan)?;
    let chips: Iq64 = match &args.chips {
        Some(path) => read_iq(path, None).with_context(|| format!("reading {}", path.display()))?,
        None => plan.chip_stream()?,
    };
    let mode = match args.preamble_render {
        PreambleRenderArg::Waveform => PreambleRender::Waveform,
        PreambleRenderArg::Zeros => PreambleRender::Zeros,
    };
    let out = render_transmission(&plan, &chips, mode)?;
    write_iq(&out, &args.output)?;
    report::write(
        args.report.as_deref(),
        "render",
        &RenderReport {
            plan: args.plan.clone(),
            output: args.output.clone(),
            frames: plan.frames.len(),
            samples: out.len(),
            duration_us: out.duration() * 1e6,
            stream_origin: plan.stream_origin(),
            preamble_render: mode,
        },
    )
}

pub fn demod(args: &DemodArgs, seed: u64) -> Result<()> {
    let params = lora_params(&args.lora, args.payload_len)?;
    let expected = args
        .expect_hex
        .as_deref()
        .map(|h| parse_hex("expect-hex", h))
        .transpose()?;
    let mut buf = read_input(&args.input)?;
    if let Some(snr) = args.snr_db {
        buf = awgn(&buf, snr, seed)?;
    }
    let rx = receive(&buf, &params)?;
    let payload_matches = expected.map(|e| rx.payload.bytes() == Some(&e[..]));
    report::write(
        args.report.as_deref(),
        "demod",
        &DemodReport {
            input: args.input.input.clone(),
            params,
            snr_db: args.snr_db,
            rx,
            payload_matches,
        },
    )
}

pub fn evm(args: &EvmArgs) -> Result<()> {
    let ideal: Iq64 = read_iq(&args.ideal, None).with_context(|| format!("reading {}", args.ideal.display()))?;
    let actual: Iq64 = read_iq(&args.actual, None).with_context(|| format!("reading {}", args.actual.display()))?;
    if args.offset > actual.len() {
        return Err(UsageError(format!(
            "--offset {} is past the end of {} ({} samples)",
            args.offset,
            args.actual.display(),
            actual.len()
        ))
        .into());
    }
    // Compare over the longer of the two, padding the shorter with silence.
    let actual = actual.slice(args.offset..actual.len());
    let len = ideal.len().max(actual.len());
    let (ideal, actual) = (ideal.padded_to(len), actual.padded_to(len));
    let inband = args.bw.map(|bw| inband_evm_snr(&ideal, &actual, bw)).transpose()?;
    let drop = match (inband, args.sf) {
        (Some(s), Some(sf)) => Some(snr_drop_db(s, sf)),
        _ => None,
    };
    report::write(
        args.report.as_deref(),
        "evm",
        &EvmReport {
            ideal: args.ideal.clone(),
            actual: args.actual.clone(),
            offset: args.offset,
            samples: len,
            evm_snr_db: evm_snr(&ideal, &actual)?,
            inband_evm_snr_db: inband,
            snr_drop_db: drop,
        },
    )
}

pub fn spectrogram_cmd(args: &SpectrogramArgs) -> Result<()> {
    let buf = read_input(&args.input)?;
    let sg = spectrogram(&buf, args.nfft, args.hop)?;
    let file = std::fs::File::create(&args.output).with_context(|| format!("writing {}", args.output.display()))?;
    sg.write_csv(std::io::BufWriter::new(file))?;
    report::write(
        args.report.as_deref(),
        "spectrogram",
        &SpectrogramReport {
            input: args.input.input.clone(),
            output: args.output.clone(),
            nfft: args.nfft,
            hop: args.hop,
            rows: sg.power_db.len(),
        },
    )
}

pub fn pcap_export(args: &PcapArgs) -> Result<()> {
    let plan = read_plan(&args.plan)?;
    let options = PcapOptions {
        channel: args.channel,
        start_us: args.start_us,
    };
    let frequency_mhz = options.frequency_mhz()?;
    let records = pcap_records(&plan, &options)?;
    let count = export_pcap(&plan, &args.output, &options)?;
    let us = |d: std::time::Duration| d.as_micros() as u64;
    report::write(
        args.report.as_deref(),
        "pcap-export",
        &PcapReport {
            plan: args.plan.clone(),
            output: args.output.clone(),
            records: count,
            channel: args.channel,
            frequency_mhz,
            first_timestamp_us: us(records[0].timestamp),
            last_timestamp_us: us(records[count - 1].timestamp),
        },
    )
}
