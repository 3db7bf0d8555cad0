//! Deconvolution of a sampled integrator driven by binary input.
//!
//! The integrator `x_{k+1} = x_k + u_k` turns the input bits into a trellis
//! code observed through an AWGN channel, so input estimation becomes
//! decoding. This crate provides:
//!
//! * [`channel`]: seeded input generation, the integrator encoder, and noise;
//! * [`decoders`]: BCJR, causal BCJR with delay `k0`, the One-State and
//!   Two-State reduced decoders, and a brute-force Bit-MAP oracle;
//! * [`analysis`]: asymptotic bit error rates of the reduced decoders from
//!   the invariant law of their state-error processes;
//! * [`harness`]: Monte Carlo sweeps, long-sequence error rates,
//!   analytic-vs-simulation comparison and oracle cross-checks.

pub mod analysis;
pub mod channel;
pub mod decoders;
pub mod error;
pub mod harness;
pub mod rng;
pub mod special;

pub use channel::{
    add_noise, encode, generate_input, snr_to_sigma, BitSequence, ChannelParams, ObservationTrace,
    StateTrajectory, Transmission,
};
pub use decoders::{
    bcjr_decode, bit_error_rate, cbcjr_decode, exhaustive_bitmap_oracle, one_state_decode,
    two_states_decode, DecoderKind, ErrorReport,
};
pub use error::{Error, Result};
