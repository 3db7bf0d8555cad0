use std::fmt::Write as _;
use std::path::Path;

use super::sweep::{sort_rows, ResultRow};
use super::write_atomic;
use crate::decoders::DecoderKind;
use crate::error::{Error, Result};

/// Whitespace-separated `snr_db ber std_err [analytic_ber]` blocks, one per
/// decoder in name order, separated by blank lines.
pub fn plot_data_text(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("no result rows to plot".into()));
    }
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    let mut out = String::new();
    for (i, block) in rows.chunk_by(|a, b| a.decoder == b.decoder).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for r in block {
            let _ = write!(out, "{} {} {}", r.snr_db, r.ber, r.std_err);
            if let Some(a) = r.analytic_ber {
                let _ = write!(out, " {a}");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn emit_plot_data(rows: &[ResultRow], path: &Path) -> Result<()> {
    let text = plot_data_text(rows)?;
    write_atomic(path, text.as_bytes())
}

/// `(snr_db, ber)` points of one decoder, by increasing SNR.
pub fn ber_curve(rows: &[ResultRow], decoder: DecoderKind) -> Vec<(f64, f64)> {
    let mut pts: Vec<_> = rows
        .iter()
        .filter(|r| r.decoder == decoder)
        .map(|r| (r.snr_db, r.ber))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

/// SNR at which a curve reaches `ber`, interpolating `log10(ber)` linearly
/// in SNR between the first pair of adjacent points that brackets it.
pub fn snr_at_ber(curve: &[(f64, f64)], ber: f64) -> Option<f64> {
    if ber.is_nan() || ber <= 0.0 {
        return None;
    }
    let target = ber.log10();
    curve.windows(2).find_map(|w| {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if !(b0 > 0.0 && b1 > 0.0) {
            return None;
        }
        let (l0, l1) = (b0.log10(), b1.log10());
        let (lo, hi) = if l0 <= l1 { (l0, l1) } else { (l1, l0) };
        if target < lo || target > hi {
            return None;
        }
        if l0 == l1 {
            return Some(0.5 * (s0 + s1));
        }
        Some(s0 + (target - l0) / (l1 - l0) * (s1 - s0))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub ber: f64,
    /// Extra SNR `other` needs over `reference` at this error rate.
    pub gap_db: f64,
}

/// Horizontal gaps between two curves at every sampled error rate both reach.
pub fn snr_gaps(reference: &[(f64, f64)], other: &[(f64, f64)]) -> Vec<GapPoint> {
    let mut levels: Vec<f64> = reference
        .iter()
        .chain(other)
        .map(|p| p.1)
        .filter(|&b| b > 0.0)
        .collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    levels
        .into_iter()
        .filter_map(|ber| {
            let a = snr_at_ber(reference, ber)?;
            let b = snr_at_ber(other, ber)?;
            Some(GapPoint { ber, gap_db: b - a })
        })
        .collect()
}
