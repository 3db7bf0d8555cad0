use std::io::Write;
use std::path::Path;

use super::grid::TwoStateKernelGrid;
use super::one_state::OneStateChain;
use crate::channel::fmt_sig17;
use crate::error::{Error, Result};
use crate::harness::write_atomic;

/// Writes `d,phi` rows of the One-State invariant vector.
pub fn write_one_state_csv(chain: &OneStateChain, path: &Path) -> Result<()> {
    let phi = chain
        .phi()
        .ok_or_else(|| Error::InvalidConfig("invariant vector not computed".into()))?;
    let mut buf = Vec::new();
    writeln!(buf, "d,phi").unwrap();
    for (d, p) in chain.d_range().zip(phi) {
        writeln!(buf, "{d},{}", fmt_sig17(*p)).unwrap();
    }
    write_atomic(path, &buf)
}

/// Writes `alpha_bin_low,alpha_bin_high,d,phi_mass` rows of the Two-State
/// invariant measure.
pub fn write_two_state_csv(grid: &TwoStateKernelGrid, path: &Path) -> Result<()> {
    let phi = grid
        .phi_tilde()
        .ok_or_else(|| Error::InvalidConfig("invariant measure not computed".into()))?;
    let mut buf = Vec::new();
    writeln!(buf, "alpha_bin_low,alpha_bin_high,d,phi_mass").unwrap();
    for (cell, p) in phi.iter().enumerate() {
        let (d, bin) = grid.coords(cell);
        let (lo, hi) = grid.bin_edges(bin);
        writeln!(
            buf,
            "{},{},{d},{}",
            fmt_sig17(lo),
            fmt_sig17(hi),
            fmt_sig17(*p)
        )
        .unwrap();
    }
    write_atomic(path, &buf)
}
