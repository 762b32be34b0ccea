//! Finite field adder multi-way relay channels.
//!
//! `L` users exchange messages through a relay over channels whose outputs are
//! field sums of the inputs plus independent noise. This crate provides:
//!
//! * exact prime-field arithmetic ([`field`]),
//! * noise distributions and entropy terms ([`entropy`]),
//! * the uplink/downlink channel model ([`channel`]),
//! * the random coset linear code ensemble with exact maximum-likelihood
//!   decoding ([`code`]),
//! * analytic capacity and comparison regions ([`regions`]),
//! * an end-to-end functional-decode-forward scheme with rate splitting and
//!   side-information decoding on the downlink ([`fdf`]).

pub mod channel;
pub mod code;
pub mod entropy;
pub mod error;
pub mod fdf;
pub mod field;
pub mod regions;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
