use std::fmt;

use crate::channel::{BitSequence, ChannelParams, ObservationTrace, Transmission};
use crate::decoders::{bcjr_decode, cbcjr_decode, exhaustive_bitmap_oracle};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, SeedPair};

pub const ORACLE_CHECK_MAX_LEN: usize = 12;

const ORACLE_DOMAIN: u64 = 0x6f72_6163_6c65_6368;

/// Which trellis decoder is compared with which oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckedDecoder {
    Bcjr,
    Cbcjr(usize),
}

impl fmt::Display for CheckedDecoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckedDecoder::Bcjr => f.write_str("bcjr"),
            CheckedDecoder::Cbcjr(k0) => write!(f, "cbcjr(k0={k0})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckConfig {
    pub len: usize,
    pub instances: usize,
    pub sigmas: Vec<f64>,
    pub k0s: Vec<usize>,
    pub master_seed: u64,
}

impl OracleCheckConfig {
    /// Delays `0`, `2` and `len`, where they fit.
    pub fn new(len: usize, instances: usize, sigmas: Vec<f64>, master_seed: u64) -> Self {
        let mut k0s: Vec<usize> = [0, 2, len].into_iter().filter(|&k| k <= len).collect();
        k0s.dedup();
        OracleCheckConfig {
            len,
            instances,
            sigmas,
            k0s,
            master_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMismatch {
    pub decoder: CheckedDecoder,
    pub sigma: f64,
    /// Master seed of the offending instance.
    pub seed: u64,
    /// One-based step whose bit `u_{k-1}` disagrees.
    pub k: usize,
    pub expected: u8,
    pub got: u8,
    /// Trace dump with oracle and decoder columns.
    pub dump: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub comparisons: usize,
    pub mismatch: Option<OracleMismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub fn instance_seed(master_seed: u64, len: usize, sigma: f64, i: usize) -> u64 {
    let a = derive_seed(master_seed, ORACLE_DOMAIN, len as u64);
    derive_seed(
        derive_seed(a, ORACLE_DOMAIN, sigma.to_bits()),
        ORACLE_DOMAIN,
        i as u64,
    )
}

/// Compares BCJR and causal BCJR with the brute-force oracles.
pub fn oracle_check(cfg: &OracleCheckConfig) -> Result<OracleReport> {
    oracle_check_with(cfg, |d, trace| match d {
        CheckedDecoder::Bcjr => bcjr_decode(trace),
        CheckedDecoder::Cbcjr(k0) => cbcjr_decode(trace, k0),
    })
}

/// As [`oracle_check`], with the decoder under test supplied by the caller.
pub fn oracle_check_with<F>(cfg: &OracleCheckConfig, decode: F) -> Result<OracleReport>
where
    F: Fn(CheckedDecoder, &ObservationTrace) -> Result<BitSequence>,
{
    if cfg.len == 0 || cfg.len > ORACLE_CHECK_MAX_LEN {
        return Err(Error::OracleScale {
            len: cfg.len,
            max: ORACLE_CHECK_MAX_LEN,
        });
    }
    if let Some(&k0) = cfg.k0s.iter().find(|&&k| k > cfg.len) {
        return Err(Error::DelayTooLarge { k0, len: cfg.len });
    }
    let checks: Vec<CheckedDecoder> = std::iter::once(CheckedDecoder::Bcjr)
        .chain(cfg.k0s.iter().map(|&k| CheckedDecoder::Cbcjr(k)))
        .collect();
    let mut comparisons = 0;
    for &sigma in &cfg.sigmas {
        let params = ChannelParams::new(sigma)?;
        for i in 0..cfg.instances {
            let seed = instance_seed(cfg.master_seed, cfg.len, sigma, i);
            let tx = Transmission::simulate(cfg.len, &params, SeedPair::from_master(seed))?;
            for &check in &checks {
                let k0 = match check {
                    CheckedDecoder::Bcjr => None,
                    CheckedDecoder::Cbcjr(k0) => Some(k0),
                };
                let expected = exhaustive_bitmap_oracle(&tx.trace, k0)?;
                let got = decode(check, &tx.trace)?;
                comparisons += 1;
                let bad = expected
                    .bits()
                    .iter()
                    .zip(got.bits())
                    .position(|(a, b)| a != b);
                if let Some(pos) = bad.or((expected.len() != got.len()).then_some(got.len())) {
                    return Ok(OracleReport {
                        comparisons,
                        mismatch: Some(OracleMismatch {
                            decoder: check,
                            sigma,
                            seed,
                            k: pos + 1,
                            expected: expected.bits().get(pos).copied().unwrap_or(0),
                            got: got.bits().get(pos).copied().unwrap_or(0),
                            dump: dump(&tx, &expected, &got),
                        }),
                    });
                }
            }
        }
    }
    Ok(OracleReport {
        comparisons,
        mismatch: None,
    })
}

fn dump(tx: &Transmission, expected: &BitSequence, got: &BitSequence) -> String {
    let mut base = Vec::new();
    tx.write_dump(&mut base).expect("writing to memory");
    let base = String::from_utf8(base).expect("dump is ascii");
    let mut out = String::from("# k u x y oracle decoded\n");
    for (k, line) in base.lines().enumerate() {
        let e = expected.bits().get(k).map_or("-".into(), |b| b.to_string());
        let g = got.bits().get(k).map_or("-".into(), |b| b.to_string());
        out.push_str(&format!("{line} {e} {g}\n"));
    }
    out
}
