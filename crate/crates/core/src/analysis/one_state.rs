use std::f64::consts::SQRT_2;

use super::check_sigma;
use crate::error::{Error, Result};
use crate::special::erfc;

pub const DEFAULT_D_MAX: usize = 30;
/// Largest accepted `Phi_{d_max} / Phi_0`.
pub const ONE_STATE_TAIL_TOL: f64 = 1e-12;

/// Error chain of the One-State decoder, truncated to `|d| <= d_max`.
///
/// Vectors are indexed by `d + d_max`.
#[derive(Debug, Clone)]
pub struct OneStateChain {
    sigma: f64,
    d_max: usize,
    p_up: Vec<f64>,
    p_down: Vec<f64>,
    phi: Option<Vec<f64>>,
}

impl OneStateChain {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn d_range(&self) -> impl Iterator<Item = i64> {
        let m = self.d_max as i64;
        -m..=m
    }

    fn idx(&self, d: i64) -> usize {
        (d + self.d_max as i64) as usize
    }

    /// `P(d -> d+1)`.
    pub fn p_up(&self, d: i64) -> f64 {
        self.p_up[self.idx(d)]
    }

    /// `P(d -> d-1)`.
    pub fn p_down(&self, d: i64) -> f64 {
        self.p_down[self.idx(d)]
    }

    /// Error probability given `D = d`.
    pub fn q(&self, d: i64) -> f64 {
        self.p_up(d) + self.p_down(d)
    }

    pub fn phi(&self) -> Option<&[f64]> {
        self.phi.as_deref()
    }

    pub fn phi_at(&self, d: i64) -> Option<f64> {
        self.phi.as_ref().map(|p| p[self.idx(d)])
    }

    /// Row vector times the truncated matrix; outward steps at `|d| = d_max`
    /// stay on the boundary.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        let mut out = vec![0.0; n];
        for (i, &mass) in v.iter().enumerate() {
            let up = self.p_up[i];
            let down = self.p_down[i];
            out[i] += mass * (1.0 - up - down);
            if i + 1 < n {
                out[i + 1] += mass * up;
            } else {
                out[i] += mass * up;
            }
            if i > 0 {
                out[i - 1] += mass * down;
            } else {
                out[i] += mass * down;
            }
        }
        out
    }
}

/// Transition probabilities of the error chain averaged over the input bit.
///
/// `p_up[d] = erfc((d + 1/2) / (sqrt2 sigma)) / 4` and
/// `p_down[d] = 1/2 - erfc((d - 1/2) / (sqrt2 sigma)) / 4`, the latter
/// evaluated as `erfc((1/2 - d) / (sqrt2 sigma)) / 4` to keep its tail.
pub fn one_state_transitions(sigma: f64, d_max: usize) -> Result<OneStateChain> {
    check_sigma(sigma)?;
    if d_max == 0 {
        return Err(Error::InvalidConfig("d_max must be at least 1".into()));
    }
    let scale = SQRT_2 * sigma;
    let m = d_max as i64;
    let p_up = (-m..=m)
        .map(|d| 0.25 * erfc((d as f64 + 0.5) / scale))
        .collect();
    let p_down = (-m..=m)
        .map(|d| 0.25 * erfc((0.5 - d as f64) / scale))
        .collect();
    Ok(OneStateChain {
        sigma,
        d_max,
        p_up,
        p_down,
        phi: None,
    })
}

/// Product-form invariant vector, `Phi_d = Phi_0 prod_{i=1}^{|d|} P(i-1,i) / P(i,i-1)`.
pub fn one_state_invariant(mut chain: OneStateChain) -> Result<OneStateChain> {
    let m = chain.d_max;
    let mut half = Vec::with_capacity(m + 1);
    let mut ratio = 1.0;
    half.push(1.0);
    for i in 1..=m as i64 {
        ratio *= chain.p_up(i - 1) / chain.p_down(i);
        half.push(ratio);
    }
    let tail = half[m];
    if tail.is_nan() || tail >= ONE_STATE_TAIL_TOL {
        return Err(Error::Truncation {
            d_max: m,
            ratio: tail,
        });
    }
    // Sum smallest terms first.
    let total = half[1..].iter().rev().fold(0.0, |acc, v| acc + v) * 2.0 + 1.0;
    let phi: Vec<f64> = half[1..]
        .iter()
        .rev()
        .chain(half.iter())
        .map(|v| v / total)
        .collect();
    chain.phi = Some(phi);
    Ok(chain)
}

/// Stationary error probability `sum_d q_d Phi_d`.
pub fn one_state_asymptotic_ber(chain: &OneStateChain) -> Result<f64> {
    let phi = chain
        .phi
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("invariant vector not computed".into()))?;
    Ok(chain.d_range().zip(phi).map(|(d, p)| chain.q(d) * p).sum())
}
