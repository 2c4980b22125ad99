use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use pcap_file::pcap::{PcapHeader, PcapPacket, PcapWriter};
use pcap_file::{DataLink, Endianness};

use crate::cck::PreambleKind;
use crate::emulator::TransmissionPlan;
use crate::error::{Error, Result};

/// Radiotap header: version, pad, length, present bitmap, flags, rate,
/// channel frequency and channel flags.
pub const RADIOTAP_LEN: usize = 14;
/// 802.11 data frame header without QoS or address 4.
pub const WLAN_HEADER_LEN: usize = 24;

const PRESENT_FLAGS: u32 = 1 << 1;
const PRESENT_RATE: u32 = 1 << 2;
const PRESENT_CHANNEL: u32 = 1 << 3;
const FLAG_SHORT_PREAMBLE: u8 = 0x02;
const CHANNEL_CCK: u16 = 0x0020;
const CHANNEL_2GHZ: u16 = 0x0080;
const SOURCE: [u8; 6] = [0x02, 0, 0, 0, 0, 0x01];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcapOptions {
    /// 2.4 GHz channel number, 1 to 14.
    pub channel: u8,
    /// Timestamp of the first frame, in microseconds.
    pub start_us: u64,
}

impl Default for PcapOptions {
    fn default() -> Self {
        Self {
            channel: 6,
            start_us: 0,
        }
    }
}

impl PcapOptions {
    pub fn frequency_mhz(&self) -> Result<u16> {
        match self.channel {
            1..=13 => Ok(2407 + 5 * u16::from(self.channel)),
            14 => Ok(2484),
            c => Err(Error::Domain(format!("2.4 GHz channel {c} does not exist"))),
        }
    }
}

/// One captured frame: timestamp and link-layer bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcapRecord {
    pub timestamp: Duration,
    pub data: Vec<u8>,
}

fn radiotap(kind: PreambleKind, rate_500kbps: u8, freq_mhz: u16) -> [u8; RADIOTAP_LEN] {
    let mut h = [0u8; RADIOTAP_LEN];
    h[2..4].copy_from_slice(&(RADIOTAP_LEN as u16).to_le_bytes());
    h[4..8].copy_from_slice(&(PRESENT_FLAGS | PRESENT_RATE | PRESENT_CHANNEL).to_le_bytes());
    h[8] = match kind {
        PreambleKind::Short => FLAG_SHORT_PREAMBLE,
        PreambleKind::Long => 0,
    };
    h[9] = rate_500kbps;
    h[10..12].copy_from_slice(&freq_mhz.to_le_bytes());
    h[12..14].copy_from_slice(&(CHANNEL_CCK | CHANNEL_2GHZ).to_le_bytes());
    h
}

fn wlan_header(seq: usize) -> [u8; WLAN_HEADER_LEN] {
    let mut h = [0u8; WLAN_HEADER_LEN];
    h[0] = 0x08;
    h[4..10].fill(0xff);
    h[10..16].copy_from_slice(&SOURCE);
    h[16..22].copy_from_slice(&SOURCE);
    h[22..24].copy_from_slice(&(((seq % 4096) as u16) << 4).to_le_bytes());
    h
}

/// Records for every frame of `plan`, stamped at the start of each frame's
/// preamble on the plan timeline (rounded to the microsecond).
pub fn pcap_records(plan: &TransmissionPlan, options: &PcapOptions) -> Result<Vec<PcapRecord>> {
    if plan.frames.is_empty() {
        return Err(Error::Domain("plan has no frames".into()));
    }
    let freq = options.frequency_mhz()?;
    Ok(plan
        .frames
        .iter()
        .zip(plan.frame_start_us())
        .enumerate()
        .map(|(seq, (frame, start))| {
            let mut data = Vec::with_capacity(RADIOTAP_LEN + WLAN_HEADER_LEN + frame.payload.len());
            data.extend_from_slice(&radiotap(frame.preamble_kind, frame.rate_500kbps(), freq));
            data.extend_from_slice(&wlan_header(seq));
            data.extend_from_slice(&frame.payload);
            PcapRecord {
                timestamp: Duration::from_micros(options.start_us + start.round() as u64),
                data,
            }
        })
        .collect())
}

/// Writes a radiotap pcap with one record per frame; returns the count.
pub fn export_pcap(plan: &TransmissionPlan, path: &Path, options: &PcapOptions) -> Result<usize> {
    let records = pcap_records(plan, options)?;
    let header = PcapHeader {
        datalink: DataLink::IEEE802_11_RADIOTAP,
        endianness: Endianness::Little,
        ..PcapHeader::default()
    };
    let to_io = |e: pcap_file::PcapError| match e {
        pcap_file::PcapError::IoError(io) => Error::Io(io),
        other => Error::Format {
            path: path.to_owned(),
            reason: other.to_string(),
        },
    };
    let mut writer = PcapWriter::with_header(BufWriter::new(File::create(path)?), header).map_err(to_io)?;
    for r in &records {
        writer
            .write_packet(&PcapPacket::new(r.timestamp, r.data.len() as u32, &r.data))
            .map_err(to_io)?;
    }
    writer.into_writer().flush()?;
    Ok(records.len())
}
