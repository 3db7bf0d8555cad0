use std::fmt::Write as _;
use std::path::Path;

use super::config::SweepConfig;
use super::write_atomic;
use crate::channel::{snr_to_sigma, ChannelParams, Transmission};
use crate::channel::{BitSequence, ObservationTrace};
use crate::decoders::{
    binomial_std_err, hamming_distance, two_states_decode_with, DecoderKind, MiddleMass,
};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, SeedPair, TRIAL_DOMAIN};

pub const CSV_HEADER: &str =
    "snr_db,sigma,decoder,ber,std_err,trials,bits_per_trial,master_seed,analytic_ber";

/// One aggregated point of a BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub snr_db: f64,
    pub sigma: f64,
    pub decoder: DecoderKind,
    pub ber: f64,
    pub std_err: f64,
    pub trials: u64,
    pub bits_per_trial: u64,
    pub master_seed: u64,
    pub analytic_ber: Option<f64>,
}

impl ResultRow {
    pub fn from_errors(
        snr_db: f64,
        decoder: DecoderKind,
        errors: u64,
        trials: u64,
        bits_per_trial: u64,
        master_seed: u64,
    ) -> Self {
        let bits = trials * bits_per_trial;
        let ber = errors as f64 / bits as f64;
        ResultRow {
            snr_db,
            sigma: snr_to_sigma(snr_db),
            decoder,
            ber,
            std_err: binomial_std_err(ber, bits),
            trials,
            bits_per_trial,
            master_seed,
            analytic_ber: None,
        }
    }

    pub fn bits_total(&self) -> u64 {
        self.trials * self.bits_per_trial
    }

    pub fn to_csv_line(&self) -> String {
        let analytic = self.analytic_ber.map(|a| a.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.sigma,
            self.decoder,
            self.ber,
            self.std_err,
            self.trials,
            self.bits_per_trial,
            self.master_seed,
            analytic
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 9 {
            return Err(Error::InvalidConfig(format!(
                "expected 9 CSV fields: `{line}`"
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad number `{s}` in `{line}`")))
        };
        let int = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad integer `{s}` in `{line}`")))
        };
        Ok(ResultRow {
            snr_db: num(f[0])?,
            sigma: num(f[1])?,
            decoder: f[2].parse()?,
            ber: num(f[3])?,
            std_err: num(f[4])?,
            trials: int(f[5])?,
            bits_per_trial: int(f[6])?,
            master_seed: int(f[7])?,
            analytic_ber: if f[8].is_empty() {
                None
            } else {
                Some(num(f[8])?)
            },
        })
    }
}

/// Orders rows by decoder, then SNR.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.decoder
            .name()
            .cmp(b.decoder.name())
            .then(a.snr_db.total_cmp(&b.snr_db))
    });
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CSV_HEADER}");
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    out
}

pub fn write_results_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    write_atomic(path, rows_to_csv(rows).as_bytes())
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::InvalidConfig(format!(
                "{}: missing results header",
                path.display()
            )))
        }
    }
    lines.map(ResultRow::from_csv_line).collect()
}

/// Seeds of trial `t` at one SNR point. Decoders share the transmission.
pub fn trial_seeds(master_seed: u64, snr_db: f64, t: u64) -> SeedPair {
    let point = derive_seed(master_seed, TRIAL_DOMAIN, snr_db.to_bits());
    SeedPair::from_master(derive_seed(point, TRIAL_DOMAIN, t))
}

pub(crate) fn decode(
    kind: DecoderKind,
    trace: &ObservationTrace,
    k0: usize,
    middle: MiddleMass,
) -> Result<BitSequence> {
    match (kind, middle) {
        (DecoderKind::TwoStates, MiddleMass::Reduced) => two_states_decode_with(trace, middle),
        _ => kind.decode(trace, k0),
    }
}

/// Error counts per trial and decoder at one SNR point.
pub fn sweep_point(cfg: &SweepConfig, snr_db: f64) -> Result<Vec<Vec<u64>>> {
    let params = ChannelParams::from_snr_db(snr_db)?;
    let n = cfg.trials;
    let workers = cfg.worker_count().clamp(1, n);
    let chunk = n.div_ceil(workers);
    let run = |range: std::ops::Range<usize>| -> Result<Vec<Vec<u64>>> {
        range
            .map(|t| {
                let seeds = trial_seeds(cfg.master_seed, snr_db, t as u64);
                let tx = Transmission::simulate(cfg.bits_per_trial, &params, seeds)?;
                cfg.decoders
                    .iter()
                    .map(|&d| {
                        let est = decode(d, &tx.trace, cfg.k0, cfg.middle)?;
                        Ok(hamming_distance(tx.input.bits(), est.bits()))
                    })
                    .collect()
            })
            .collect()
    };
    let per_trial: Vec<Vec<u64>> = if workers == 1 {
        run(0..n)?
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let range = (w * chunk).min(n)..((w + 1) * chunk).min(n);
                    s.spawn(move || run(range))
                })
                .collect();
            let mut all = Vec::with_capacity(n);
            for h in handles {
                all.extend(h.join().expect("sweep worker panicked")?);
            }
            Ok::<_, Error>(all)
        })?
    };
    Ok((0..cfg.decoders.len())
        .map(|m| per_trial.iter().map(|row| row[m]).collect())
        .collect())
}

/// Runs every (SNR, decoder) point; writes the CSV when an output path is set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &snr in &cfg.snr_db {
        let counts = sweep_point(cfg, snr)?;
        for (&decoder, per_trial) in cfg.decoders.iter().zip(counts) {
            rows.push(ResultRow::from_errors(
                snr,
                decoder,
                per_trial.iter().sum(),
                cfg.trials as u64,
                cfg.bits_per_trial as u64,
                cfg.master_seed,
            ));
        }
    }
    sort_rows(&mut rows);
    if let Some(path) = &cfg.output_path {
        write_results_csv(&rows, path)?;
    }
    Ok(rows)
}
