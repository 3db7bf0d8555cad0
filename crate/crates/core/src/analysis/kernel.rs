//! Closed-form transition kernel of the Two-State error process.
//!
//! From `(alpha, d)` the process moves to `(alpha', d')` with
//! `d' in {d-1, d, d+1}`. The functions here give
//! `P((alpha, d), (0, beta) x {d'})`, the CDF of the new stored-state
//! probability restricted to each `d'`, as combinations of
//! `H_{x,y}(z) = erfc(h_{x,y}(z)) / 2` with
//! `h_{x,y}(z) = (sigma^2 ln(x (1-z)/z) + y + 1/2) / (sigma sqrt2)`.
//!
//! The weights `x in {alpha, 1/(1-alpha), 1}` are passed as logarithms and
//! the branch points `1/(1+c)`, `c/(1+c)` through their log-odds `+-ln c`, so
//! nothing overflows when `exp(1/sigma^2)` does.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::special::erfc;

/// Ingredients `c_alpha`, `h_{x,y}` and `H_{x,y}` of the kernel at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAtoms {
    sigma: f64,
    var: f64,
    scale: f64,
}

impl KernelAtoms {
    pub fn new(sigma: f64) -> Result<Self> {
        super::check_sigma(sigma)?;
        Ok(KernelAtoms {
            sigma,
            var: sigma * sigma,
            scale: SQRT_2 * sigma,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `ln c_alpha = (1/sigma^2 - ln alpha - ln(1-alpha)) / 2`.
    pub fn ln_c_alpha(&self, alpha: f64) -> f64 {
        0.5 * (1.0 / self.var - alpha.ln() - (-alpha).ln_1p())
    }

    /// `c_alpha = sqrt(exp(1/sigma^2) / (alpha (1-alpha)))`.
    pub fn c_alpha(&self, alpha: f64) -> f64 {
        self.ln_c_alpha(alpha).exp()
    }

    /// Lower branch point `1 / (1 + c_alpha)`.
    pub fn lower_break(&self, alpha: f64) -> f64 {
        sigmoid(-self.ln_c_alpha(alpha))
    }

    /// Upper branch point `c_alpha / (1 + c_alpha)`.
    pub fn upper_break(&self, alpha: f64) -> f64 {
        sigmoid(self.ln_c_alpha(alpha))
    }

    pub fn h(&self, x: f64, y: f64, z: f64) -> f64 {
        self.h_log(x.ln(), y, log_odds(z))
    }

    #[allow(non_snake_case)]
    pub fn H(&self, x: f64, y: f64, z: f64) -> f64 {
        0.5 * erfc(self.h(x, y, z))
    }

    /// `h` from `ln x` and `ln((1-z)/z)`.
    #[inline]
    fn h_log(&self, ln_x: f64, y: f64, odds: f64) -> f64 {
        (self.var * (ln_x + odds) + y + 0.5) / self.scale
    }

    #[inline]
    fn big_h_log(&self, ln_x: f64, y: f64, odds: f64) -> f64 {
        0.5 * erfc(self.h_log(ln_x, y, odds))
    }

    /// `P((alpha, d), (0, beta) x {d'})`.
    pub fn cdf(&self, alpha: f64, d: i64, beta: f64, d_prime: i64) -> f64 {
        let shift = d_prime - d;
        if !(-1..=1).contains(&shift) || beta <= 0.0 {
            return 0.0;
        }
        let beta = beta.min(1.0);
        let odds = log_odds(beta);
        let d = d as f64;
        let interior = alpha > 0.0 && alpha < 1.0;
        let (ln_a, ln_bar, ln_c) = if interior {
            let ln_1ma = (-alpha).ln_1p();
            (alpha.ln(), -ln_1ma, self.ln_c_alpha(alpha))
        } else {
            (0.0, 0.0, f64::INFINITY)
        };
        // beta <= 1/(1+c) iff odds >= ln c; beta <= c/(1+c) iff odds >= -ln c.
        let below_lo = odds >= ln_c;
        let below_hi = odds >= -ln_c;
        match shift {
            0 => {
                if !interior {
                    0.5 * self.big_h_log(0.0, d, odds)
                } else if below_lo {
                    0.5 * self.big_h_log(ln_bar, d, odds)
                } else {
                    let low_part = self.big_h_log(ln_a, d, odds) - self.big_h_log(ln_a, d, ln_c);
                    let high_part = if below_hi {
                        self.big_h_log(ln_bar, d, odds)
                    } else {
                        self.big_h_log(ln_bar, d, -ln_c)
                    };
                    0.5 * (low_part + high_part)
                }
            }
            1 => {
                if alpha >= 1.0 {
                    0.0
                } else if !interior || below_hi {
                    0.5 * self.big_h_log(ln_bar, d + 1.0, odds)
                } else {
                    0.5 * self.big_h_log(ln_bar, d + 1.0, -ln_c)
                }
            }
            _ => {
                if alpha <= 0.0 {
                    0.0
                } else if alpha >= 1.0 {
                    0.5 * self.big_h_log(0.0, d - 1.0, odds)
                } else if below_lo {
                    0.0
                } else {
                    0.5 * (self.big_h_log(ln_a, d - 1.0, odds)
                        - self.big_h_log(ln_a, d - 1.0, ln_c))
                }
            }
        }
    }

    /// `(P((alpha,d), [0,1] x {d+1}), P((alpha,d), [0,1] x {d-1}))`.
    pub fn marginals(&self, alpha: f64, d: i64) -> (f64, f64) {
        let half_logit = 0.5 * (alpha.ln() - (-alpha).ln_1p());
        let shift = self.var * half_logit;
        let d = d as f64;
        let up = if alpha >= 1.0 {
            0.0
        } else {
            0.25 * erfc((shift + d + 1.0) / self.scale)
        };
        let down = if alpha <= 0.0 {
            0.0
        } else {
            0.25 * erfc(-(shift + d) / self.scale)
        };
        (up, down)
    }

    /// Error probability of the next decision given `(alpha, d)`.
    pub fn qbar(&self, alpha: f64, d: i64) -> f64 {
        let shift = self.var * self.ln_z1(alpha);
        let d = d as f64;
        0.5 * (0.5 * erfc((shift + d + 0.5) / self.scale)
            + 0.5 * erfc(-(shift + d - 0.5) / self.scale))
    }

    /// Log of the positive root of `(1-alpha) e^{-1/sigma^2} z^2 + (2 alpha - 1) z - alpha`.
    fn ln_z1(&self, alpha: f64) -> f64 {
        const EDGE: f64 = 1e-12;
        let inv_var = 1.0 / self.var;
        if alpha >= 1.0 - EDGE {
            return 0.0;
        }
        if alpha <= EDGE {
            return inv_var;
        }
        let b = 2.0 * alpha - 1.0;
        let ln_a = (-alpha).ln_1p() - inv_var;
        let a = ln_a.exp();
        let root_disc = (b * b + 4.0 * a * alpha).sqrt();
        if b >= 0.0 {
            let denom = b + root_disc;
            if denom > 0.0 {
                (2.0 * alpha).ln() - denom.ln()
            } else {
                0.5 * (alpha.ln() - ln_a)
            }
        } else {
            (root_disc - b).ln() - std::f64::consts::LN_2 - ln_a
        }
    }
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln((1-z)/z)`.
#[inline]
fn log_odds(z: f64) -> f64 {
    (-z).ln_1p() - z.ln()
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} = {v} outside [0, 1]")))
    }
}

pub fn two_state_kernel_cdf(
    alpha: f64,
    d: i64,
    beta: f64,
    d_prime: i64,
    sigma: f64,
) -> Result<f64> {
    check_unit("alpha", alpha)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "beta = {beta} outside (0, 1]"
        )));
    }
    Ok(KernelAtoms::new(sigma)?.cdf(alpha, d, beta, d_prime))
}

pub fn two_state_kernel_marginals(alpha: f64, d: i64, sigma: f64) -> Result<(f64, f64)> {
    check_unit("alpha", alpha)?;
    Ok(KernelAtoms::new(sigma)?.marginals(alpha, d))
}

pub fn qbar(alpha: f64, d: i64, sigma: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    Ok(KernelAtoms::new(sigma)?.qbar(alpha, d))
}

/// Largest discrepancies found when comparing the kernel with its mirror image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    /// Against `(1 - alpha, -d)` with `d' -> -d'`.
    pub same_d: f64,
    /// Against `(1 - alpha, -d - 1)` with `d' -> -d' - 1`, which maps the
    /// stored pair `(x, x+1)` onto its reflection.
    pub shifted_d: f64,
}

/// Compares `P((a, d), (0, b) x {d'})` with the mass the mirrored state puts
/// on `(1 - b, 1) x {mirror(d')}`, over a sample grid.
pub fn kernel_symmetry_defects(
    sigma: f64,
    samples: usize,
    d_range: i64,
) -> Result<SymmetryDefects> {
    let atoms = KernelAtoms::new(sigma)?;
    let mut same_d = 0.0f64;
    let mut shifted_d = 0.0f64;
    let n = samples.max(2);
    for ai in 1..n {
        let alpha = ai as f64 / n as f64;
        for bi in 1..n {
            let beta = bi as f64 / n as f64;
            for d in -d_range..=d_range {
                for dp in d - 1..=d + 1 {
                    let p = atoms.cdf(alpha, d, beta, dp);
                    let mirror = |md: i64, mdp: i64| {
                        atoms.cdf(1.0 - alpha, md, 1.0, mdp)
                            - atoms.cdf(1.0 - alpha, md, 1.0 - beta, mdp)
                    };
                    same_d = same_d.max((p - mirror(-d, -dp)).abs());
                    shifted_d = shifted_d.max((p - mirror(-d - 1, -dp - 1)).abs());
                }
            }
        }
    }
    Ok(SymmetryDefects { same_d, shifted_d })
}
