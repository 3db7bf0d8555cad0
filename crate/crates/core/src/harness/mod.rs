//! Monte Carlo sweeps, long-sequence error rates, analytic comparisons,
//! oracle cross-checks and result files.

mod cber;
mod config;
mod oracle_check;
mod plot;
mod sweep;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub use cber::{cber_seeds, compare_analytic, run_cber, run_cber_with};
pub use config::{parse_kv, parse_list, AnalysisConfig, Config, SweepConfig};
pub use oracle_check::{
    instance_seed, oracle_check, oracle_check_with, CheckedDecoder, OracleCheckConfig,
    OracleMismatch, OracleReport, ORACLE_CHECK_MAX_LEN,
};
pub use plot::{ber_curve, emit_plot_data, plot_data_text, snr_at_ber, snr_gaps, GapPoint};
pub use sweep::{
    read_results_csv, rows_to_csv, run_sweep, sort_rows, sweep_point, trial_seeds,
    write_results_csv, ResultRow, CSV_HEADER,
};

use crate::error::{Error, Result};

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Creates a fresh `<base>/<unix seconds>-<seed>` directory, adding a
/// numeric suffix rather than reusing an existing one.
pub fn create_run_dir(base: &Path, master_seed: u64) -> Result<PathBuf> {
    std::fs::create_dir_all(base).map_err(|e| Error::io(base, e))?;
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let stem = format!("{stamp}-{master_seed}");
    for n in 0.. {
        let name = if n == 0 {
            stem.clone()
        } else {
            format!("{stem}-{n}")
        };
        let dir = base.join(name);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(Error::io(dir, e)),
        }
    }
    unreachable!()
}
