//! Decoders for the integrator-over-AWGN channel.

mod metrics;
mod oracle;
mod reduced;
mod trellis;

use std::fmt;
use std::str::FromStr;

pub use metrics::{binomial_std_err, bit_error_rate, hamming_distance, ErrorReport};
pub use oracle::{exhaustive_bitmap_oracle, ORACLE_MAX_LEN};
pub use reduced::{
    one_state_decode, one_state_steps, two_states_decode, two_states_decode_with, two_states_steps,
    write_steps, MiddleMass, OneStateDecoder, StepRecord, TwoStateDecoder,
};
pub use trellis::{bcjr_decode, cbcjr_decode, Scaling, TrellisPosteriors};

use crate::channel::{BitSequence, ObservationTrace};
use crate::error::{Error, Result};

/// The four decoders, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    Bcjr,
    Cbcjr,
    OneState,
    TwoStates,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::Bcjr,
        DecoderKind::Cbcjr,
        DecoderKind::OneState,
        DecoderKind::TwoStates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Bcjr => "bcjr",
            DecoderKind::Cbcjr => "cbcjr",
            DecoderKind::OneState => "one_state",
            DecoderKind::TwoStates => "two_states",
        }
    }

    /// Decodes a trace; `k0` is used by the causal BCJR only.
    pub fn decode(self, trace: &ObservationTrace, k0: usize) -> Result<BitSequence> {
        match self {
            DecoderKind::Bcjr => bcjr_decode(trace),
            DecoderKind::Cbcjr => cbcjr_decode(trace, k0),
            DecoderKind::OneState => one_state_decode(trace),
            DecoderKind::TwoStates => two_states_decode(trace),
        }
    }

    pub fn is_reduced_state(self) -> bool {
        matches!(self, DecoderKind::OneState | DecoderKind::TwoStates)
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bcjr" => Ok(DecoderKind::Bcjr),
            "cbcjr" => Ok(DecoderKind::Cbcjr),
            "one_state" | "one-state" => Ok(DecoderKind::OneState),
            "two_states" | "two-states" => Ok(DecoderKind::TwoStates),
            other => Err(Error::UnknownDecoder(other.to_string())),
        }
    }
}
