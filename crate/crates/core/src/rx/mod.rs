//! Verification channel and software LoRa receiver.

mod awgn;
mod demod;
mod metrics;
mod receiver;
mod sensitivity;
mod sync;

pub use awgn::awgn;
pub use demod::{dechirp_demodulate, Dechirper, Demodulated, LOW_CONFIDENCE_RATIO};
pub use metrics::{
    band_energy_fraction, band_limit, demod_floor_db, evm_snr, inband_evm_snr, snr_drop_db, EVM_SNR_CAP_DB,
};
pub use receiver::{receive, PayloadOutcome, RxResult};
pub use sensitivity::{min_snr_for_ser, symbol_error_rate};
pub use sync::{detect_and_sync, SyncResult, MIN_PREAMBLE_RUN};
