//! Brute-force Bit-MAP decisions by enumerating every input word.
//!
//! Used as the reference for the trellis decoders. The posterior of each bit
//! is the likelihood summed over all words (or all prefixes, for the causal
//! variant) with that bit fixed; the uniform prior cancels.

use crate::channel::{BitSequence, ObservationTrace};
use crate::error::{Error, Result};

pub const ORACLE_MAX_LEN: usize = 20;

/// Bit-wise argmax of the posterior. With `k0 = Some(d)` bit `k-1` is decided
/// from `y_1 .. y_{min(k+d, K)}` only.
pub fn exhaustive_bitmap_oracle(
    trace: &ObservationTrace,
    k0: Option<usize>,
) -> Result<BitSequence> {
    let len = trace.len();
    if len == 0 {
        return Err(Error::EmptyTrace);
    }
    if len > ORACLE_MAX_LEN {
        return Err(Error::OracleScale {
            len,
            max: ORACLE_MAX_LEN,
        });
    }
    let scale = trace.params().inv_two_var();
    let y = trace.samples();
    let bits = match k0 {
        None => prefix_decisions(y, scale),
        Some(d) if d > len => return Err(Error::DelayTooLarge { k0: d, len }),
        Some(d) => {
            let mut bits = vec![0u8; len];
            let mut cached: Option<(usize, Vec<u8>)> = None;
            for k in 1..=len {
                let m = (k + d).min(len);
                if cached.as_ref().map(|(cm, _)| *cm) != Some(m) {
                    cached = Some((m, prefix_decisions(&y[..m], scale)));
                }
                bits[k - 1] = cached.as_ref().expect("filled above").1[k - 1];
            }
            bits
        }
    };
    Ok(BitSequence::from_raw(bits))
}

/// Bit-MAP decisions for every bit of the words of length `y.len()` given `y`.
fn prefix_decisions(y: &[f64], scale: f64) -> Vec<u8> {
    let m = y.len();
    let words = 1usize << m;
    let log_lik: Vec<f64> = (0..words)
        .map(|w| {
            let mut x = 0u32;
            let mut acc = 0.0;
            for (j, &yk) in y.iter().enumerate() {
                x += ((w >> j) & 1) as u32;
                let r = yk - x as f64;
                acc -= r * r * scale;
            }
            acc
        })
        .collect();
    let max = log_lik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut mass = vec![[0.0f64; 2]; m];
    for (w, &l) in log_lik.iter().enumerate() {
        let p = (l - max).exp();
        for (j, slot) in mass.iter_mut().enumerate() {
            slot[(w >> j) & 1] += p;
        }
    }
    mass.iter()
        .map(|[zero, one]| u8::from(one > zero))
        .collect()
}
