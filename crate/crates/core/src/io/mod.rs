//! File formats: raw IQ with a JSON sidecar, radiotap pcap of the frame
//! train, and spectrogram CSV.

mod iq_file;
mod pcap;
mod spectrogram;

pub use iq_file::{read_iq, sidecar_path, write_iq, Sidecar};
pub use pcap::{export_pcap, pcap_records, PcapOptions, PcapRecord, RADIOTAP_LEN, WLAN_HEADER_LEN};
pub use spectrogram::{spectrogram, Spectrogram};
