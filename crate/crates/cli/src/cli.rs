use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cck-lora", version, about = "Emulate LoRa frames with 802.11b CCK payloads")]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file with default flag values: top-level keys apply to every
    /// command, a table named after the command to that command only.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for every random draw (payloads, noise).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a LoRa frame as cf32 IQ.
    LoraSynth(SynthArgs),
    /// Replace an 11 MHz waveform with its closest CCK codewords.
    Emulate(EmulateArgs),
    /// Emulate and cut the result into a train of 802.11b frames.
    Segment(SegmentArgs),
    /// Render a frame train as transmitted, with preambles and gaps.
    Render(RenderArgs),
    /// Receive and decode a LoRa frame.
    Demod(DemodArgs),
    /// EVM-SNR of an actual waveform against an ideal one.
    Evm(EvmArgs),
    /// Short-time power spectrum as CSV.
    Spectrogram(SpectrogramArgs),
    /// Write a frame train as a radiotap pcap for injection.
    PcapExport(PcapArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LoraSynth(_) => "lora-synth",
            Command::Emulate(_) => "emulate",
            Command::Segment(_) => "segment",
            Command::Render(_) => "render",
            Command::Demod(_) => "demod",
            Command::Evm(_) => "evm",
            Command::Spectrogram(_) => "spectrogram",
            Command::PcapExport(_) => "pcap-export",
        }
    }
}

#[derive(Debug, Args)]
pub struct LoraArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(5..=12))]
    pub sf: u8,
    /// Bandwidth in Hz.
    #[arg(long)]
    pub bw: f64,
    /// Coding rate denominator: 5 to 8 for 4/5 to 4/8.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(5..=8))]
    pub cr: u8,
    #[arg(long, default_value_t = cck_lora::lora::DEFAULT_PREAMBLE_LEN)]
    pub preamble_len: usize,
    /// Two sync-word symbol values.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0u32, 0])]
    pub sync_word: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub lora: LoraArgs,
    #[arg(long, conflicts_with = "payload_len", required_unless_present = "payload_len")]
    pub payload_hex: Option<String>,
    /// Random payload of this many bytes drawn from --seed.
    #[arg(long)]
    pub payload_len: Option<usize>,
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 11e6)]
    pub fs: f64,
    /// Zero samples before the frame.
    #[arg(long, default_value_t = 0)]
    pub lead: usize,
    /// Zero samples after the frame.
    #[arg(long, default_value_t = 0)]
    pub trail: usize,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScramblerArgs {
    /// Leave payload bits unscrambled (for hardware that scrambles itself).
    #[arg(long)]
    pub no_scramble: bool,
    #[arg(long, default_value_t = cck_lora::cck::DEFAULT_SCRAMBLER_SEED)]
    pub scrambler_seed: u8,
    /// φ1 reference of the first symbol, in quarter turns.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..4))]
    pub reference_phase: u8,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Sample rate in Hz when the input has no sidecar.
    #[arg(long)]
    pub fs: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EmulateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub scrambler: ScramblerArgs,
    /// Emulated chips as cf32 IQ.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Raw payload bytes of the whole codeword stream.
    #[arg(long)]
    pub payload_out: Option<PathBuf>,
    /// Spreading factor and bandwidth of the target, for in-band metrics.
    #[arg(long, requires = "bw", value_parser = clap::value_parser!(u8).range(5..=12))]
    pub sf: Option<u8>,
    #[arg(long, requires = "sf")]
    pub bw: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PreambleArg {
    Short,
    Long,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Aligned,
    Contiguous,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PreambleRenderArg {
    Waveform,
    Zeros,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub scrambler: ScramblerArgs,
    #[arg(long, default_value_t = cck_lora::cck::MAX_PAYLOAD_BYTES)]
    pub max_payload_bytes: usize,
    /// Payload air time per frame in microseconds.
    #[arg(long)]
    pub frame_payload_us: Option<f64>,
    #[arg(long, default_value_t = 12.0)]
    pub ifs_us: f64,
    #[arg(long, value_enum, default_value_t = PreambleArg::Short)]
    pub preamble: PreambleArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Aligned)]
    pub mode: ModeArg,
    /// Transmission plan as JSON.
    #[arg(long)]
    pub plan: PathBuf,
    /// Emulated chip stream as cf32 IQ.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub plan: PathBuf,
    /// Emulated chip stream; rebuilt from the plan's payloads if omitted.
    #[arg(long)]
    pub chips: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PreambleRenderArg::Waveform)]
    pub preamble_render: PreambleRenderArg,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemodArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub lora: LoraArgs,
    #[arg(long)]
    pub payload_len: usize,
    /// Add white Gaussian noise at this SNR first, drawn from --seed.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Expected payload, reported as a match flag.
    #[arg(long)]
    pub expect_hex: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvmArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long)]
    pub actual: PathBuf,
    /// Samples of `actual` to skip before comparing.
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    /// LoRa bandwidth for the in-band figure.
    #[arg(long)]
    pub bw: Option<f64>,
    /// Spreading factor for the SNR-drop figure; needs --bw.
    #[arg(long, requires = "bw", value_parser = clap::value_parser!(u8).range(5..=12))]
    pub sf: Option<u8>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrogramArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 256)]
    pub nfft: usize,
    #[arg(long, default_value_t = 64)]
    pub hop: usize,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PcapArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long, default_value_t = 6)]
    pub channel: u8,
    /// Timestamp of the first record in microseconds.
    #[arg(long, default_value_t = 0)]
    pub start_us: u64,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
