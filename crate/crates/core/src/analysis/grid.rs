use super::check_sigma;
use super::kernel::KernelAtoms;
use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 128;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;
/// Largest accepted invariant mass on `|d| = d_max`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

const REPAIR_LIMIT: f64 = 1e-6;

/// Starting distribution of the power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Start {
    #[default]
    Uniform,
    /// All mass on the bin containing `alpha = 1` at `d = 0`.
    DecoderInit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptions {
    pub n_bins: usize,
    pub d_max: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub tail_tol: f64,
    pub start: Start,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            n_bins: DEFAULT_BINS,
            d_max: super::DEFAULT_D_MAX,
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            tail_tol: DEFAULT_TAIL_TOL,
            start: Start::Uniform,
        }
    }
}

/// Discretized kernel of the Two-State error process.
///
/// Cells are `(d, bin)` pairs indexed `(d + d_max) * n_bins + bin`. Each source
/// cell keeps three dense blocks of `n_bins` masses, one per destination
/// `d' in {d-1, d, d+1}`; at `|d| = d_max` the outward block is folded into
/// the middle one and left empty.
#[derive(Debug, Clone)]
pub struct TwoStateKernelGrid {
    sigma: f64,
    n_bins: usize,
    d_max: usize,
    blocks: Vec<f64>,
    max_repair: f64,
    phi_tilde: Option<Vec<f64>>,
    iterations: usize,
    residual: f64,
}

impl TwoStateKernelGrid {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn n_d(&self) -> usize {
        2 * self.d_max + 1
    }

    pub fn n_cells(&self) -> usize {
        self.n_d() * self.n_bins
    }

    pub fn cell(&self, d: i64, bin: usize) -> usize {
        assert!(d.unsigned_abs() as usize <= self.d_max && bin < self.n_bins);
        (d + self.d_max as i64) as usize * self.n_bins + bin
    }

    /// `(d, bin)` of a cell index.
    pub fn coords(&self, cell: usize) -> (i64, usize) {
        (
            (cell / self.n_bins) as i64 - self.d_max as i64,
            cell % self.n_bins,
        )
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let n = self.n_bins as f64;
        (bin as f64 / n, (bin + 1) as f64 / n)
    }

    pub fn bin_mid(&self, bin: usize) -> f64 {
        (bin as f64 + 0.5) / self.n_bins as f64
    }

    /// Largest mass moved by the row repair.
    pub fn max_repair(&self) -> f64 {
        self.max_repair
    }

    pub fn phi_tilde(&self) -> Option<&[f64]> {
        self.phi_tilde.as_deref()
    }

    /// Power-iteration steps and final L1 residual.
    pub fn convergence(&self) -> (usize, f64) {
        (self.iterations, self.residual)
    }

    fn row_blocks(&self, cell: usize) -> &[f64] {
        let w = 3 * self.n_bins;
        &self.blocks[cell * w..(cell + 1) * w]
    }

    /// Destination `d` index of block `b` (0: down, 1: stay, 2: up) of a row.
    fn dest(&self, d_idx: usize, b: usize) -> usize {
        let top = 2 * self.d_max;
        match b {
            0 => d_idx.saturating_sub(1),
            1 => d_idx,
            _ => (d_idx + 1).min(top),
        }
    }

    /// Transition mass between two cells.
    pub fn transition(&self, from: usize, to: usize) -> f64 {
        let d_idx = from / self.n_bins;
        let (to_d, to_bin) = (to / self.n_bins, to % self.n_bins);
        let row = self.row_blocks(from);
        (0..3)
            .filter(|&b| self.dest(d_idx, b) == to_d && !self.folded(d_idx, b))
            .map(|b| row[b * self.n_bins + to_bin])
            .sum()
    }

    fn folded(&self, d_idx: usize, b: usize) -> bool {
        (b == 0 && d_idx == 0) || (b == 2 && d_idx == 2 * self.d_max)
    }

    pub fn row_sum(&self, cell: usize) -> f64 {
        self.row_blocks(cell).iter().sum()
    }

    /// `v P` for a row vector `v` over cells.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        out
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let nb = self.n_bins;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (cell, &mass) in v.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let d_idx = cell / nb;
            let row = self.row_blocks(cell);
            for b in 0..3 {
                if self.folded(d_idx, b) {
                    continue;
                }
                let base = self.dest(d_idx, b) * nb;
                let src = &row[b * nb..(b + 1) * nb];
                for (o, &p) in out[base..base + nb].iter_mut().zip(src) {
                    *o += mass * p;
                }
            }
        }
    }

    /// Invariant mass per `d`, for `d = -d_max..=d_max`.
    pub fn d_marginal(&self) -> Option<Vec<f64>> {
        let phi = self.phi_tilde.as_ref()?;
        Some(phi.chunks(self.n_bins).map(|c| c.iter().sum()).collect())
    }

    /// Invariant mass on `|d| = d_max`.
    pub fn tail_mass(&self) -> Option<f64> {
        let m = self.d_marginal()?;
        Some(m[0] + m[m.len() - 1])
    }
}

/// Builds the cell-to-cell transition matrix from bin-edge CDF differences.
pub fn discretize_kernel(sigma: f64, n_bins: usize, d_max: usize) -> Result<TwoStateKernelGrid> {
    check_sigma(sigma)?;
    if n_bins < 8 {
        return Err(Error::InvalidConfig(format!(
            "need at least 8 bins, got {n_bins}"
        )));
    }
    if d_max < 2 {
        return Err(Error::InvalidConfig(format!(
            "d_max must be at least 2, got {d_max}"
        )));
    }
    let atoms = KernelAtoms::new(sigma)?;
    let n_d = 2 * d_max + 1;
    let n_cells = n_d * n_bins;
    let w = 3 * n_bins;
    let mut blocks = vec![0.0; n_cells * w];
    let mut max_repair = 0.0f64;
    let edges: Vec<f64> = (1..=n_bins).map(|j| j as f64 / n_bins as f64).collect();
    let mut cdf = vec![0.0; n_bins + 1];

    for cell in 0..n_cells {
        let d_idx = cell / n_bins;
        let d = d_idx as i64 - d_max as i64;
        let alpha = (cell % n_bins) as f64 / n_bins as f64 + 0.5 / n_bins as f64;
        let row = &mut blocks[cell * w..(cell + 1) * w];
        for b in 0..3 {
            let dp = d + b as i64 - 1;
            cdf[0] = 0.0;
            for (j, &e) in edges.iter().enumerate() {
                cdf[j + 1] = atoms.cdf(alpha, d, e, dp);
            }
            let fold = (b == 0 && d_idx == 0) || (b == 2 && d_idx == n_d - 1);
            let target = if fold { 1 } else { b };
            for j in 0..n_bins {
                row[target * n_bins + j] += (cdf[j + 1] - cdf[j]).max(0.0);
            }
        }
        let deficit = 1.0 - row.iter().sum::<f64>();
        if deficit.abs() > REPAIR_LIMIT {
            return Err(Error::Discretization { row: cell, deficit });
        }
        max_repair = max_repair.max(deficit.abs());
        repair_row(row);
    }

    Ok(TwoStateKernelGrid {
        sigma,
        n_bins,
        d_max,
        blocks,
        max_repair,
        phi_tilde: None,
        iterations: 0,
        residual: f64::NAN,
    })
}

fn repair_row(row: &mut [f64]) {
    const NEGLIGIBLE: f64 = 1.0 / (1u64 << 54) as f64;
    let (imax, _) =
        row.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    row[imax] += 1.0 - row.iter().sum::<f64>();
    for _ in 0..16 {
        let sum: f64 = row.iter().sum();
        if sum == 1.0 {
            return;
        }
        if let Some(last) = row.iter().rposition(|&v| v >= NEGLIGIBLE) {
            let fix = 1.0 - row[..last].iter().sum::<f64>();
            if last != imax && fix >= 0.0 {
                let keep = row[last];
                row[last] = fix;
                if row.iter().sum::<f64>() == 1.0 {
                    return;
                }
                row[last] = keep;
            }
        }
        row[imax] = if sum < 1.0 {
            row[imax].next_up()
        } else {
            row[imax].next_down()
        };
    }
}

/// Iterates `phi <- phi P` until successive iterates differ by less than
/// `opts.tol` in L1.
pub fn invariant_by_iteration(
    mut grid: TwoStateKernelGrid,
    opts: &GridOptions,
) -> Result<TwoStateKernelGrid> {
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_iters == 0 {
        return Err(Error::InvalidConfig(
            "power iteration needs tol > 0 and max_iters > 0".into(),
        ));
    }
    let n = grid.n_cells();
    let mut cur = match opts.start {
        Start::Uniform => vec![1.0 / n as f64; n],
        Start::DecoderInit => {
            let mut v = vec![0.0; n];
            v[grid.cell(0, grid.n_bins - 1)] = 1.0;
            v
        }
    };
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        grid.apply_into(&cur, &mut next);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        residual = cur.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut cur, &mut next);
        iterations += 1;
        if residual < opts.tol {
            break;
        }
    }
    grid.iterations = iterations;
    grid.residual = residual;
    if residual.is_nan() || residual >= opts.tol {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    grid.phi_tilde = Some(cur);
    let tail = grid.tail_mass().unwrap_or(0.0);
    if tail > opts.tail_tol {
        return Err(Error::Truncation {
            d_max: grid.d_max,
            ratio: tail,
        });
    }
    Ok(grid)
}

/// `sum_cells qbar(mid alpha, d) phi_tilde(cell)`.
pub fn two_state_asymptotic_ber(grid: &TwoStateKernelGrid) -> Result<f64> {
    let phi = grid.phi_tilde.as_ref().ok_or_else(|| {
        Error::InvalidConfig("invariant measure not computed for this grid".into())
    })?;
    let atoms = KernelAtoms::new(grid.sigma)?;
    let mut ber = 0.0;
    for (cell, &mass) in phi.iter().enumerate() {
        let (d, bin) = grid.coords(cell);
        ber += mass * atoms.qbar(grid.bin_mid(bin), d);
    }
    Ok(ber.clamp(0.0, 1.0))
}
