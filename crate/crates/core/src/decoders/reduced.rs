//! Reduced-state causal decoders keeping one or two trellis states.

use std::io::{self, Write};

use crate::channel::{BitSequence, ChannelParams, ObservationTrace};
use crate::error::{Error, Result};
use crate::special::log_add_exp;

/// One-State decoder: trusts its single estimated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OneStateDecoder {
    x_hat: u64,
}

impl OneStateDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn x_hat(&self) -> u64 {
        self.x_hat
    }

    /// Decides the next bit: 0 iff `|y - x| <= |y - (x+1)|`, i.e. `y <= x + 1/2`.
    #[inline]
    pub fn step(&mut self, y: f64) -> u8 {
        let bit = u8::from(y > self.x_hat as f64 + 0.5);
        self.x_hat += bit as u64;
        bit
    }
}

/// Form of the middle candidate's mass in the Two-State update.
///
/// Under AWGN both branches into the middle state carry the same weight, so
/// the two forms agree up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MiddleMass {
    /// `alpha * Gamma(x, x+1) + (1 - alpha) * Gamma(x+1, x+1)`.
    #[default]
    General,
    /// `Gamma(x+1, x+1)` alone.
    Reduced,
}

impl MiddleMass {
    pub fn name(self) -> &'static str {
        match self {
            MiddleMass::General => "general",
            MiddleMass::Reduced => "reduced",
        }
    }
}

impl std::str::FromStr for MiddleMass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "general" => Ok(MiddleMass::General),
            "reduced" => Ok(MiddleMass::Reduced),
            other => Err(Error::InvalidConfig(format!(
                "middle mass must be `general` or `reduced`, got `{other}`"
            ))),
        }
    }
}

/// Two-State decoder: the adjacent pair `(x_hat, x_hat + 1)` with
/// probabilities `(alpha, 1 - alpha)`.
///
/// `alpha` is carried as its log-odds so that masses within `1e-16` of 0 or 1
/// are not rounded away.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateDecoder {
    x_hat: u64,
    logit: f64,
    inv_two_var: f64,
    middle: MiddleMass,
}

impl TwoStateDecoder {
    /// Starts from the double state `(alpha, x_hat) = (1, 0)`.
    pub fn new(params: &ChannelParams) -> Self {
        Self::with_state(params, 0, 1.0)
    }

    pub fn with_state(params: &ChannelParams, x_hat: u64, alpha: f64) -> Self {
        let alpha = alpha.clamp(0.0, 1.0);
        TwoStateDecoder {
            x_hat,
            logit: alpha.ln() - (1.0 - alpha).ln(),
            inv_two_var: params.inv_two_var(),
            middle: MiddleMass::General,
        }
    }

    pub fn with_middle_mass(mut self, middle: MiddleMass) -> Self {
        self.middle = middle;
        self
    }

    pub fn x_hat(&self) -> u64 {
        self.x_hat
    }

    pub fn alpha(&self) -> f64 {
        if self.logit >= 0.0 {
            1.0 / (1.0 + (-self.logit).exp())
        } else {
            let e = self.logit.exp();
            e / (1.0 + e)
        }
    }

    #[inline]
    pub fn step(&mut self, y: f64) -> u8 {
        let t = y - self.x_hat as f64;
        let w = |j: f64| {
            let r = t - j;
            -r * r * self.inv_two_var
        };
        let (g0, g1, g2) = (w(0.0), w(1.0), w(2.0));
        let la = -softplus(-self.logit);
        let lb = -softplus(self.logit);

        let stay = log_add_exp(la + g0, lb + g1);
        let up = log_add_exp(la + g1, lb + g2);
        let bit = u8::from(up > stay);

        let low = la + g0;
        let mid = match self.middle {
            MiddleMass::General => log_add_exp(la + g1, lb + g1),
            MiddleMass::Reduced => g1,
        };
        let high = lb + g2;
        if high <= low {
            self.logit = low - mid;
        } else {
            self.x_hat += 1;
            self.logit = mid - high;
        }
        bit
    }
}

/// `ln(1 + e^x)`.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn one_state_decode(trace: &ObservationTrace) -> Result<BitSequence> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut dec = OneStateDecoder::new();
    Ok(BitSequence::from_raw(
        trace.samples().iter().map(|&y| dec.step(y)).collect(),
    ))
}

pub fn two_states_decode(trace: &ObservationTrace) -> Result<BitSequence> {
    two_states_decode_with(trace, MiddleMass::General)
}

pub fn two_states_decode_with(trace: &ObservationTrace, middle: MiddleMass) -> Result<BitSequence> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut dec = TwoStateDecoder::new(trace.params()).with_middle_mass(middle);
    Ok(BitSequence::from_raw(
        trace.samples().iter().map(|&y| dec.step(y)).collect(),
    ))
}

/// Per-step record for the debug dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub decision: u8,
    pub alpha: f64,
    pub x_hat: u64,
}

pub fn one_state_steps(trace: &ObservationTrace) -> Vec<StepRecord> {
    let mut dec = OneStateDecoder::new();
    trace
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let decision = dec.step(y);
            StepRecord {
                k: i + 1,
                decision,
                alpha: 1.0,
                x_hat: dec.x_hat(),
            }
        })
        .collect()
}

pub fn two_states_steps(trace: &ObservationTrace) -> Vec<StepRecord> {
    let mut dec = TwoStateDecoder::new(trace.params());
    trace
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let decision = dec.step(y);
            StepRecord {
                k: i + 1,
                decision,
                alpha: dec.alpha(),
                x_hat: dec.x_hat(),
            }
        })
        .collect()
}

/// Writes `k decision alpha x_hat` lines.
pub fn write_steps<W: Write>(steps: &[StepRecord], mut out: W) -> io::Result<()> {
    for s in steps {
        writeln!(out, "{} {} {:.16e} {}", s.k, s.decision, s.alpha, s.x_hat)?;
    }
    Ok(())
}
