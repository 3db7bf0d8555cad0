use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::analysis::GridOptions;
use crate::decoders::{DecoderKind, MiddleMass};
use crate::error::{Error, Result};

/// Monte Carlo sweep over SNR points and decoders.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub bits_per_trial: usize,
    pub decoders: Vec<DecoderKind>,
    pub k0: usize,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub middle: MiddleMass,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            snr_db: (-5..=15).map(f64::from).collect(),
            trials: 5000,
            bits_per_trial: 100,
            decoders: DecoderKind::ALL.to_vec(),
            k0: 0,
            master_seed: 0,
            output_path: None,
            middle: MiddleMass::General,
            threads: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.decoders.is_empty() {
            return Err(Error::InvalidConfig("no decoders selected".into()));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig(
                "SNR list must be nonempty and finite".into(),
            ));
        }
        if self.trials == 0 || self.bits_per_trial == 0 {
            return Err(Error::InvalidConfig(
                "trials and bits per trial must be positive".into(),
            ));
        }
        if self.decoders.contains(&DecoderKind::Cbcjr) && self.k0 > self.bits_per_trial {
            return Err(Error::DelayTooLarge {
                k0: self.k0,
                len: self.bits_per_trial,
            });
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let bits = self.trials as u64 * self.bits_per_trial as u64;
        if bits < 1000 {
            vec![format!(
                "only {bits} bits per point; error rates will be unreliable"
            )]
        } else {
            Vec::new()
        }
    }

    pub fn worker_count(&self) -> usize {
        match self.threads {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        }
    }
}

/// Settings of the analytic and long-sequence experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub sigmas: Vec<f64>,
    pub grid: GridOptions,
    pub mc_bits: u64,
    pub input_seed: Option<u64>,
    pub noise_seed: Option<u64>,
    pub oracle_instances: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            sigmas: vec![0.5, 1.0, 2.0],
            grid: GridOptions::default(),
            mc_bits: 10_000_000,
            input_seed: None,
            noise_seed: None,
            oracle_instances: 200,
        }
    }
}

/// Everything a `key = value` file can set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub sweep: SweepConfig,
    pub analysis: AnalysisConfig,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (key, value) in parse_kv(text)? {
            cfg.set(&key, &value)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let s = &mut self.sweep;
        let a = &mut self.analysis;
        match key {
            "snr_db" | "snr" => s.snr_db = parse_list(value)?,
            "trials" => s.trials = parse(key, value)?,
            "bits_per_trial" | "bits" => s.bits_per_trial = parse(key, value)?,
            "decoders" => {
                s.decoders = split_list(value)
                    .map(DecoderKind::from_str)
                    .collect::<Result<_>>()?
            }
            "k0" => s.k0 = parse(key, value)?,
            "master_seed" | "seed" => s.master_seed = parse(key, value)?,
            "output_path" | "out" => s.output_path = Some(PathBuf::from(value)),
            "middle_mass" => s.middle = value.parse()?,
            "threads" => s.threads = parse(key, value)?,
            "sigma" => a.sigmas = parse_list(value)?,
            "d_max" => a.grid.d_max = parse(key, value)?,
            "n_bins" | "bins" => a.grid.n_bins = parse(key, value)?,
            "tol" => a.grid.tol = parse(key, value)?,
            "max_iters" => a.grid.max_iters = parse(key, value)?,
            "tail_tol" => a.grid.tail_tol = parse(key, value)?,
            "mc_bits" => a.mc_bits = parse(key, value)?,
            "input_seed" => a.input_seed = Some(parse(key, value)?),
            "noise_seed" => a.noise_seed = Some(parse(key, value)?),
            "oracle_instances" => a.oracle_instances = parse(key, value)?,
            other => return Err(Error::InvalidConfig(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Snapshot in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let s = &self.sweep;
        let a = &self.analysis;
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        let _ = writeln!(out, "snr_db = {}", join(&s.snr_db));
        let _ = writeln!(out, "trials = {}", s.trials);
        let _ = writeln!(out, "bits_per_trial = {}", s.bits_per_trial);
        let names: Vec<_> = s.decoders.iter().map(|d| d.name()).collect();
        let _ = writeln!(out, "decoders = {}", names.join(","));
        let _ = writeln!(out, "k0 = {}", s.k0);
        let _ = writeln!(out, "master_seed = {}", s.master_seed);
        if let Some(p) = &s.output_path {
            let _ = writeln!(out, "output_path = {}", p.display());
        }
        let _ = writeln!(out, "middle_mass = {}", s.middle.name());
        let _ = writeln!(out, "sigma = {}", join(&a.sigmas));
        let _ = writeln!(out, "d_max = {}", a.grid.d_max);
        let _ = writeln!(out, "n_bins = {}", a.grid.n_bins);
        let _ = writeln!(out, "tol = {:e}", a.grid.tol);
        let _ = writeln!(out, "max_iters = {}", a.grid.max_iters);
        let _ = writeln!(out, "tail_tol = {:e}", a.grid.tail_tol);
        let _ = writeln!(out, "mc_bits = {}", a.mc_bits);
        if let Some(v) = a.input_seed {
            let _ = writeln!(out, "input_seed = {v}");
        }
        if let Some(v) = a.noise_seed {
            let _ = writeln!(out, "noise_seed = {v}");
        }
        let _ = writeln!(out, "oracle_instances = {}", a.oracle_instances);
        out
    }
}

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected `key = value`", n + 1))
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value `{value}` for `{key}`")))
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

/// Numbers separated by commas or spaces; `start:step:stop` expands to a range.
pub fn parse_list(value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in split_list(value) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse::<f64>("list", x)?),
            [a, step, b] => {
                let (a, step, b): (f64, f64, f64) = (
                    parse("range", a)?,
                    parse("range", step)?,
                    parse("range", b)?,
                );
                if step.is_nan() || step <= 0.0 || b < a {
                    return Err(Error::InvalidConfig(format!("bad range `{item}`")));
                }
                let n = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| a + i as f64 * step));
            }
            _ => return Err(Error::InvalidConfig(format!("bad list item `{item}`"))),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidConfig("empty list".into()));
    }
    Ok(out)
}
