//! Information-theoretic toolkit for an energy harvesting transmitter with a
//! unit battery sending over a noiseless binary (or ternary) channel.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`channel`]: the slot-level battery state machine and a seeded simulator.
//! - [`timing`]: lossless conversion between slot traces and the equivalent
//!   timing channel `T = V + Z` with geometric idle time `Z`.
//! - [`rates`]: closed-form rates (naive i.i.d. Shannon strategy, zero storage,
//!   infinite storage, genie upper bound) and their scalar maximization.
//! - [`modulo`]: the modulo-`N` timing scheme, its fractional-program optimizer,
//!   and a working encoder/decoder (binary and ternary).
//! - [`oiid`]: information-rate estimation of i.i.d. Shannon strategies under
//!   optimal decoding, via forward recursions over the battery state.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod entropy;
mod error;
pub mod golden;
pub mod modulo;
pub mod oiid;
pub mod rates;
pub mod rng;
pub mod timing;

pub use channel::{battery_update, simulate, BatteryState, BinaryTrace, ChannelParams, Policy};
pub use error::{Error, Result};
pub use modulo::{Pmf, SchemeRate};
pub use rates::RateResult;
pub use timing::{binary_to_timing, timing_to_binary, TimingSymbol, TimingTrace};
