//! Unit-integrator encoder and the sampled AWGN channel.
//!
//! The sampling period is fixed to one, so the integrator state after `k`
//! samples is the number of ones among the first `k` input bits and the
//! trellis lives on the nonnegative integers.

use std::io::{self, Write};

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;

/// Noise level of the channel. The SNR is `1 / sigma^2` expressed in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    sigma: f64,
    snr_db: f64,
}

impl ChannelParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(ChannelParams {
            sigma,
            snr_db: 0.0 - 20.0 * sigma.log10(),
        })
    }

    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "SNR must be finite, got {snr_db}"
            )));
        }
        let sigma = snr_to_sigma(snr_db);
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(ChannelParams { sigma, snr_db })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    /// `1 / (2 sigma^2)`, the scale of the Gaussian log-likelihood.
    #[inline]
    pub(crate) fn inv_two_var(&self) -> f64 {
        0.5 / (self.sigma * self.sigma)
    }
}

pub fn snr_to_sigma(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

/// Binary input word `u_0 .. u_{K-1}` (or an estimate of it).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSequence(Vec<u8>);

impl BitSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidConfig(format!(
                "bit {pos} has value {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(BitSequence(bits))
    }

    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitSequence(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> u64 {
        self.0.iter().map(|&b| b as u64).sum()
    }

    pub fn complement(&self) -> Self {
        BitSequence(self.0.iter().map(|&b| 1 - b).collect())
    }
}

/// Integrator states `x_1 .. x_K`; `x_0 = 0` is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTrajectory(Vec<u64>);

impl StateTrajectory {
    pub fn states(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Noisy samples `y_k = x_k + n_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationTrace {
    samples: Vec<f64>,
    params: ChannelParams,
    seed: u64,
}

impl ObservationTrace {
    /// Wraps externally supplied samples. `seed` only records provenance.
    pub fn new(samples: Vec<f64>, params: ChannelParams, seed: u64) -> Result<Self> {
        if let Some(pos) = samples.iter().position(|y| !y.is_finite()) {
            return Err(Error::InvalidConfig(format!("sample {pos} is not finite")));
        }
        Ok(ObservationTrace {
            samples,
            params,
            seed,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Prefix `y_1 .. y_len`.
    pub fn truncated(&self, len: usize) -> ObservationTrace {
        ObservationTrace {
            samples: self.samples[..len.min(self.samples.len())].to_vec(),
            params: self.params,
            seed: self.seed,
        }
    }
}

/// Fair coin flips drawn 64 at a time from a seeded stream.
pub struct InputStream {
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
}

impl InputStream {
    pub fn new(seed: u64) -> Self {
        InputStream {
            rng: rng::stream(seed),
            word: 0,
            left: 0,
        }
    }

    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let bit = (self.word & 1) as u8;
        self.word >>= 1;
        self.left -= 1;
        bit
    }
}

/// I.i.d. `Normal(0, sigma^2)` samples from a seeded stream.
pub struct NoiseStream {
    rng: ChaCha8Rng,
    sigma: f64,
}

impl NoiseStream {
    pub fn new(params: &ChannelParams, seed: u64) -> Self {
        NoiseStream {
            rng: rng::stream(seed),
            sigma: params.sigma,
        }
    }

    #[inline]
    pub fn next_noise(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        self.sigma * z
    }
}

pub fn generate_input(len: usize, seed: u64) -> Result<BitSequence> {
    if len == 0 {
        return Err(Error::InvalidConfig(
            "input length must be at least 1".into(),
        ));
    }
    let mut stream = InputStream::new(seed);
    Ok(BitSequence((0..len).map(|_| stream.next_bit()).collect()))
}

pub fn encode(input: &BitSequence) -> StateTrajectory {
    let states = input
        .bits()
        .iter()
        .scan(0u64, |x, &u| {
            *x += u as u64;
            Some(*x)
        })
        .collect();
    StateTrajectory(states)
}

pub fn add_noise(states: &StateTrajectory, params: &ChannelParams, seed: u64) -> ObservationTrace {
    let mut noise = NoiseStream::new(params, seed);
    let samples = states
        .states()
        .iter()
        .map(|&x| x as f64 + noise.next_noise())
        .collect();
    ObservationTrace {
        samples,
        params: *params,
        seed,
    }
}

/// Input, states and observations of one transmission.
#[derive(Debug, Clone)]
pub struct Transmission {
    pub input: BitSequence,
    pub states: StateTrajectory,
    pub trace: ObservationTrace,
}

impl Transmission {
    pub fn simulate(len: usize, params: &ChannelParams, seeds: rng::SeedPair) -> Result<Self> {
        let input = generate_input(len, seeds.input)?;
        let states = encode(&input);
        let trace = add_noise(&states, params, seeds.noise);
        Ok(Transmission {
            input,
            states,
            trace,
        })
    }

    /// Debug dump, one line `k u_{k-1} x_k y_k` per sample.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        let rows = self
            .input
            .bits()
            .iter()
            .zip(self.states.states())
            .zip(self.trace.samples());
        for (k, ((u, x), y)) in rows.enumerate() {
            writeln!(out, "{} {} {} {}", k + 1, u, x, fmt_sig17(*y))?;
        }
        Ok(())
    }
}

/// Shortest round-trip formatting is not stable across toolchains; fix 17 significant digits.
pub fn fmt_sig17(v: f64) -> String {
    format!("{v:.16e}")
}
