use crate::channel::BitSequence;
use crate::error::{Error, Result};

/// Bit error counts of one or more decoded sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub ber: f64,
    pub bit_errors: u64,
    pub bits_total: u64,
    /// Error count of each trial, when the report aggregates several.
    pub per_trial_errors: Option<Vec<u64>>,
}

impl ErrorReport {
    pub fn from_counts(bit_errors: u64, bits_total: u64) -> Result<Self> {
        if bits_total == 0 {
            return Err(Error::InvalidConfig("error report over zero bits".into()));
        }
        if bit_errors > bits_total {
            return Err(Error::InvalidConfig(format!(
                "{bit_errors} errors in {bits_total} bits"
            )));
        }
        Ok(ErrorReport {
            ber: bit_errors as f64 / bits_total as f64,
            bit_errors,
            bits_total,
            per_trial_errors: None,
        })
    }

    pub fn from_trials(per_trial: Vec<u64>, bits_per_trial: u64) -> Result<Self> {
        let errors = per_trial.iter().sum();
        let mut report = Self::from_counts(errors, per_trial.len() as u64 * bits_per_trial)?;
        report.per_trial_errors = Some(per_trial);
        Ok(report)
    }

    /// Binomial standard error `sqrt(ber (1 - ber) / n)`.
    pub fn std_err(&self) -> f64 {
        binomial_std_err(self.ber, self.bits_total)
    }
}

pub fn binomial_std_err(ber: f64, bits: u64) -> f64 {
    (ber * (1.0 - ber) / bits as f64).sqrt()
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

pub fn bit_error_rate(u: &BitSequence, u_hat: &BitSequence) -> Result<ErrorReport> {
    if u.len() != u_hat.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: u_hat.len(),
        });
    }
    ErrorReport::from_counts(hamming_distance(u.bits(), u_hat.bits()), u.len() as u64)
}
