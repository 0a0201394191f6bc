//! Discrete Gaussian mutation kernel with truncated support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

pub const DEFAULT_TRUNCATION: f64 = 5.0;

/// Gaussian kernel `exp(-(y - x)^2 / sigma^2)`, cut at `trunc * sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub sigma: f64,
    pub trunc: f64,
}

impl KernelSpec {
    pub fn new(sigma: f64) -> Self {
        KernelSpec {
            sigma,
            trunc: DEFAULT_TRUNCATION,
        }
    }

    pub fn with_truncation(mut self, trunc: f64) -> Self {
        self.trunc = trunc;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {}", self.sigma),
            ));
        }
        if !(self.trunc >= 3.0) {
            return Err(Error::param(
                "trunc",
                format!("must be >= 3, got {}", self.trunc),
            ));
        }
        Ok(())
    }
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::new(0.01)
    }
}

/// Weights of the kernel row for one source node, over a contiguous
/// run of target nodes starting at `start`.
#[derive(Debug, Clone, Copy)]
pub struct KernelRow<'a> {
    pub start: usize,
    pub weights: &'a [f64],
}

/// Row-normalized kernel: for every source `y_j`, the trapezoid integral of
/// the row over the targets is one.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    grid: Grid,
    spec: KernelSpec,
    starts: Vec<usize>,
    offsets: Vec<usize>,
    weights: Vec<f64>,
    tail_bound: f64,
}

pub fn build_kernel(grid: &Grid, spec: &KernelSpec) -> Result<KernelMatrix> {
    spec.validate()?;
    let dx = grid.dx();
    if spec.sigma < 2.0 * dx {
        return Err(Error::UnresolvedKernel {
            sigma: spec.sigma,
            dx,
        });
    }
    let half = ((spec.trunc * spec.sigma) / dx * (1.0 + 1e-12)).floor() as usize;
    let profile: Vec<f64> = (0..=half)
        .map(|k| (-((k as f64 * dx) / spec.sigma).powi(2)).exp())
        .collect();

    let len = grid.len();
    let mut starts = Vec::with_capacity(len);
    let mut offsets = Vec::with_capacity(len + 1);
    let mut weights = Vec::with_capacity(len * (2 * half + 1));
    offsets.push(0);
    for j in 0..len {
        let lo = j.saturating_sub(half);
        let hi = (j + half).min(grid.m());
        let row_start = weights.len();
        let mut z = 0.0;
        for i in lo..=hi {
            let w = profile[i.abs_diff(j)];
            z += grid.weight(i) * w;
            weights.push(w);
        }
        for w in &mut weights[row_start..] {
            *w /= z;
        }
        starts.push(lo);
        offsets.push(weights.len());
    }

    let kernel = KernelMatrix {
        grid: *grid,
        spec: *spec,
        starts,
        offsets,
        weights,
        tail_bound: lattice_tail_fraction(dx / spec.sigma, half),
    };
    log::debug!(
        "kernel sigma={} trunc={}: half-width {} nodes, tail bound {:e}, max mean displacement {:e}",
        spec.sigma,
        spec.trunc,
        half,
        kernel.tail_bound,
        kernel.max_mean_displacement()
    );
    Ok(kernel)
}

/// Relative mass of a sampled Gaussian `exp(-(k h)^2)` beyond `|k| > half`
/// on the infinite lattice.
fn lattice_tail_fraction(h: f64, half: usize) -> f64 {
    let mut total = 1.0;
    let mut tail = 0.0;
    let mut k = 1usize;
    loop {
        let v = (-(k as f64 * h).powi(2)).exp();
        if v < 1e-300 {
            break;
        }
        total += 2.0 * v;
        if k > half {
            tail += 2.0 * v;
        }
        k += 1;
    }
    tail / total
}

impl KernelMatrix {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Relative Gaussian mass discarded by the truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn row(&self, source: usize) -> KernelRow<'_> {
        KernelRow {
            start: self.starts[source],
            weights: &self.weights[self.offsets[source]..self.offsets[source + 1]],
        }
    }

    /// Weight from source node `source` to target node `target` (zero outside the support).
    pub fn weight(&self, source: usize, target: usize) -> f64 {
        let row = self.row(source);
        if target < row.start || target >= row.start + row.weights.len() {
            0.0
        } else {
            row.weights[target - row.start]
        }
    }

    /// Trapezoid integral of a row over its targets.
    pub fn row_integral(&self, source: usize) -> f64 {
        let row = self.row(source);
        row.weights
            .iter()
            .enumerate()
            .map(|(k, w)| self.grid.weight(row.start + k) * w)
            .sum()
    }

    /// `max_j |int (x - y_j) M(y_j, x) dx|`, nonzero only near the boundaries.
    pub fn max_mean_displacement(&self) -> f64 {
        (0..self.grid.len())
            .map(|j| {
                let row = self.row(j);
                let y = self.grid.node(j);
                row.weights
                    .iter()
                    .enumerate()
                    .map(|(k, w)| {
                        let i = row.start + k;
                        self.grid.weight(i) * w * (self.grid.node(i) - y)
                    })
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    /// Accumulates `out_i += scale * sum_j w_j source_j M(y_j, x_i)` where
    /// `w_j` are the trapezoid weights.
    pub fn apply_gain(&self, source: &[f64], scale: f64, out: &mut [f64]) {
        debug_assert_eq!(source.len(), self.grid.len());
        debug_assert_eq!(out.len(), self.grid.len());
        for (j, &s) in source.iter().enumerate() {
            let coef = scale * self.grid.weight(j) * s;
            if coef == 0.0 {
                continue;
            }
            let row = self.row(j);
            let target = &mut out[row.start..row.start + row.weights.len()];
            for (o, w) in target.iter_mut().zip(row.weights) {
                *o += coef * w;
            }
        }
    }
}
