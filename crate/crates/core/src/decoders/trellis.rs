//! Forward-backward decoding on the integrator trellis.
//!
//! State `i` at step `k` is the integrator value `x_k = i`, reachable only for
//! `i <= k`. Each branch `i -> j` with `j in {i, i+1}` carries the weight
//! `Gamma_k(i, j) = 1/2 * N(y_k; j, sigma^2)`, which depends on the
//! destination only. All quantities are kept as natural logarithms; the
//! per-step normalization subtracts the log of the vector's sum.

use std::f64::consts::PI;

use crate::channel::{BitSequence, ObservationTrace};
use crate::error::{Error, Result};
use crate::special::{log_add_exp, log_sum_exp};

/// How per-step quantities are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    /// Drop the Gaussian constant and renormalize alpha and beta to unit sum.
    #[default]
    PerStep,
    /// Raw densities, including `1 / (2 sigma sqrt(2 pi))`, never rescaled.
    Raw,
}

/// Forward, backward and branch quantities of one trace, in log form.
#[derive(Debug, Clone)]
pub struct TrellisPosteriors {
    log_alpha: Vec<Vec<f64>>,
    log_beta: Vec<Vec<f64>>,
    log_gamma: Vec<Vec<f64>>,
}

impl TrellisPosteriors {
    pub fn compute(trace: &ObservationTrace, scaling: Scaling) -> Result<Self> {
        if trace.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let log_gamma = branch_weights(trace, scaling);
        let log_alpha = forward(&log_gamma, scaling);
        let log_beta = backward(&log_gamma, scaling);
        Ok(TrellisPosteriors {
            log_alpha,
            log_beta,
            log_gamma,
        })
    }

    /// Number of trellis sections `K`.
    pub fn len(&self) -> usize {
        self.log_gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_gamma.is_empty()
    }

    /// `alpha_k(i)` for `k in 0..=K`; zero for unreachable `i > k`.
    pub fn alpha(&self, k: usize, i: usize) -> f64 {
        self.log_alpha[k].get(i).map_or(0.0, |v| v.exp())
    }

    /// `beta_k(i)` for `k in 0..=K`, stored over the reachable states `i <= k`.
    pub fn beta(&self, k: usize, i: usize) -> f64 {
        self.log_beta[k].get(i).map_or(0.0, |v| v.exp())
    }

    /// `Gamma_k(i, j)` for `k in 1..=K`; zero off the diagonal/superdiagonal band.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        if j != i && j != i + 1 {
            return 0.0;
        }
        self.log_gamma[k - 1].get(j).map_or(0.0, |v| v.exp())
    }

    pub fn alpha_row(&self, k: usize) -> Vec<f64> {
        self.log_alpha[k].iter().map(|v| v.exp()).collect()
    }

    pub fn beta_row(&self, k: usize) -> Vec<f64> {
        self.log_beta[k].iter().map(|v| v.exp()).collect()
    }

    /// Bit-MAP decisions using the full backward recursion.
    pub fn decisions(&self) -> BitSequence {
        let bits = (1..=self.len())
            .map(|k| self.decide(k, &self.log_beta[k]))
            .collect();
        BitSequence::from_raw(bits)
    }

    /// Decisions whose backward part looks at most `k0` samples ahead.
    pub fn causal_decisions(&self, k0: usize, scaling: Scaling) -> BitSequence {
        let len = self.len();
        let mut scratch = Vec::new();
        let bits = (1..=len)
            .map(|k| {
                if k + k0 >= len {
                    self.decide(k, &self.log_beta[k])
                } else {
                    self.truncated_beta(k, k + k0, scaling, &mut scratch);
                    self.decide(k, &scratch)
                }
            })
            .collect();
        BitSequence::from_raw(bits)
    }

    /// `beta~_k` restricted to states `0..=k`: backward recursion started
    /// from ones at step `end`.
    fn truncated_beta(&self, k: usize, end: usize, scaling: Scaling, out: &mut Vec<f64>) {
        out.clear();
        out.resize(end + 1, 0.0);
        let mut next = vec![0.0; end + 1];
        for m in (k + 1..=end).rev() {
            backward_step(&self.log_gamma[m - 1], out, &mut next[..m]);
            if scaling == Scaling::PerStep {
                normalize(&mut next[..m]);
            }
            std::mem::swap(out, &mut next);
            out.truncate(m);
            next.resize(end + 1, 0.0);
        }
    }

    /// Decision on `u_{k-1}`: 1 iff the superdiagonal transition mass
    /// strictly exceeds the diagonal one.
    fn decide(&self, k: usize, log_beta: &[f64]) -> u8 {
        let prev = &self.log_alpha[k - 1];
        let gamma = &self.log_gamma[k - 1];
        let stay = log_sum_exp(
            prev.iter()
                .enumerate()
                .map(|(i, a)| a + gamma[i] + log_beta[i]),
        );
        let up = log_sum_exp(
            prev.iter()
                .enumerate()
                .map(|(i, a)| a + gamma[i + 1] + log_beta[i + 1]),
        );
        u8::from(up > stay)
    }
}

fn branch_weights(trace: &ObservationTrace, scaling: Scaling) -> Vec<Vec<f64>> {
    let scale = trace.params().inv_two_var();
    let offset = match scaling {
        Scaling::PerStep => 0.0,
        Scaling::Raw => -(2.0 * trace.sigma() * (2.0 * PI).sqrt()).ln(),
    };
    trace
        .samples()
        .iter()
        .enumerate()
        .map(|(idx, &y)| {
            (0..=idx + 1)
                .map(|j| {
                    let r = y - j as f64;
                    offset - r * r * scale
                })
                .collect()
        })
        .collect()
}

fn forward(log_gamma: &[Vec<f64>], scaling: Scaling) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(log_gamma.len() + 1);
    rows.push(vec![0.0]);
    for gamma in log_gamma {
        let prev: &Vec<f64> = rows.last().expect("alpha_0 present");
        let k = prev.len();
        let mut row: Vec<f64> = (0..=k)
            .map(|j| {
                let stay = if j < k { prev[j] } else { f64::NEG_INFINITY };
                let up = if j > 0 {
                    prev[j - 1]
                } else {
                    f64::NEG_INFINITY
                };
                log_add_exp(stay, up) + gamma[j]
            })
            .collect();
        if scaling == Scaling::PerStep {
            normalize(&mut row);
        }
        rows.push(row);
    }
    rows
}

fn backward(log_gamma: &[Vec<f64>], scaling: Scaling) -> Vec<Vec<f64>> {
    let len = log_gamma.len();
    let mut rows = vec![Vec::new(); len + 1];
    let mut last = vec![0.0; len + 1];
    if scaling == Scaling::PerStep {
        normalize(&mut last);
    }
    rows[len] = last;
    for k in (1..=len).rev() {
        let mut row = vec![0.0; k];
        backward_step(&log_gamma[k - 1], &rows[k], &mut row);
        if scaling == Scaling::PerStep {
            normalize(&mut row);
        }
        rows[k - 1] = row;
    }
    rows
}

/// `beta_{k-1}(i) = Gamma_k(i,i) beta_k(i) + Gamma_k(i,i+1) beta_k(i+1)`.
#[inline]
fn backward_step(gamma: &[f64], next: &[f64], out: &mut [f64]) {
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = log_add_exp(gamma[i] + next[i], gamma[i + 1] + next[i + 1]);
    }
}

fn normalize(row: &mut [f64]) {
    let total = log_sum_exp(row.iter().copied());
    if total.is_finite() {
        row.iter_mut().for_each(|v| *v -= total);
    }
}

pub fn bcjr_decode(trace: &ObservationTrace) -> Result<BitSequence> {
    Ok(TrellisPosteriors::compute(trace, Scaling::PerStep)?.decisions())
}

/// Causal BCJR: bit `k-1` is decided from `y_1 .. y_{k+k0}`.
pub fn cbcjr_decode(trace: &ObservationTrace, k0: usize) -> Result<BitSequence> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if k0 > trace.len() {
        return Err(Error::DelayTooLarge {
            k0,
            len: trace.len(),
        });
    }
    let post = TrellisPosteriors::compute(trace, Scaling::PerStep)?;
    Ok(post.causal_decisions(k0, Scaling::PerStep))
}
