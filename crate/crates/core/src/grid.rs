//! Uniform trait grids, trapezoid quadrature and densities on them.
//!
//! The trait axis is truncated to `[0, x_max]`. All quadrature in the crate
//! uses the trapezoid rule with half weights at both endpoints.

use crate::error::{Error, Result};

/// Floor applied to densities before taking logarithms.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-300;

/// Uniform grid `x_i = i * dx`, `i = 0..=m`, with `dx = x_max / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    m: usize,
    x_max: f64,
    dx: f64,
}

impl Grid {
    pub fn new(m: usize, x_max: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need m >= 2, got {m}")));
        }
        if !(x_max > 0.0) || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!("need x_max > 0, got {x_max}")));
        }
        Ok(Grid {
            m,
            x_max,
            dx: x_max / m as f64,
        })
    }

    /// Number of intervals.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of nodes, `m + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i == self.m {
            self.x_max
        } else {
            i as f64 * self.dx
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Trapezoid weight of node `i`, including the factor `dx`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.m {
            0.5 * self.dx
        } else {
            self.dx
        }
    }

    /// Trapezoid rule over a slice of nodal values.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let n = values.len();
        let interior: f64 = values[1..n - 1].iter().sum();
        self.dx * (interior + 0.5 * (values[0] + values[n - 1]))
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = (x / self.dx).round();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.m)
        }
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.node(i))).collect()
    }
}

/// Nonnegative cell density sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    grid: Grid,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "density has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((node, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    population: "input",
                    node,
                    t: f64::NAN,
                    value,
                });
            }
            return Err(Error::param(
                "density",
                format!("negative value {value} at node {node}"),
            ));
        }
        Ok(DensityField { grid, values })
    }

    /// Skips validation; callers guarantee finiteness and nonnegativity.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        DensityField { grid, values }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index of the largest value; the lowest index wins ties.
    pub fn argmax_index(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Trait at the largest value.
    pub fn argmax(&self) -> f64 {
        self.grid.node(self.argmax_index())
    }

    /// Mass-weighted mean trait.
    pub fn mean_trait(&self) -> f64 {
        let mass = integrate(self);
        let first = self
            .grid
            .integrate_values(&self.grid.sample_indexed(|i, x| x * self.values[i]));
        first / mass
    }

    /// Trait below which a fraction `q` of the mass lies, linearly
    /// interpolated between nodes.
    pub fn mass_quantile(&self, q: f64) -> f64 {
        let total = integrate(self);
        let target = q.clamp(0.0, 1.0) * total;
        let mut acc = 0.0;
        for i in 0..self.grid.m() {
            let piece = 0.5 * self.grid.dx() * (self.values[i] + self.values[i + 1]);
            if acc + piece >= target && piece > 0.0 {
                let frac = (target - acc) / piece;
                return self.grid.node(i) + frac * self.grid.dx();
            }
            acc += piece;
        }
        self.grid.x_max()
    }

    /// Density scaled to unit mass.
    pub fn normalized(&self) -> Result<DensityField> {
        let mass = integrate(self);
        if !(mass > 0.0) {
            return Err(Error::ZeroMass);
        }
        Ok(DensityField::from_raw(
            self.grid,
            self.values.iter().map(|v| v / mass).collect(),
        ))
    }

    /// Fraction of mass in the top `fraction` of the domain.
    pub fn upper_tail_mass_fraction(&self, fraction: f64) -> f64 {
        let total = integrate(self);
        if !(total > 0.0) {
            return 0.0;
        }
        let start = ((1.0 - fraction) * self.grid.m() as f64).floor() as usize;
        let mut tail = 0.0;
        for i in start..self.grid.m() {
            tail += 0.5 * self.grid.dx() * (self.values[i] + self.values[i + 1]);
        }
        tail / total
    }
}

impl Grid {
    fn sample_indexed(&self, f: impl Fn(usize, f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(i, self.node(i))).collect()
    }
}

/// Trapezoid quadrature of a density.
pub fn integrate(f: &DensityField) -> f64 {
    if f.values.iter().any(|v| *v < 0.0) {
        log::warn!("integrating a density with negative values");
    }
    f.grid.integrate_values(&f.values)
}

/// `exp(-(x - center)^2 / eps)` scaled to the requested trapezoid mass.
pub fn gaussian_bump(grid: Grid, center: f64, eps: f64, target_mass: f64) -> Result<DensityField> {
    if !(eps > 0.0) {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    if !(target_mass > 0.0) {
        return Err(Error::param(
            "target_mass",
            format!("must be positive, got {target_mass}"),
        ));
    }
    if !(0.0..=grid.x_max()).contains(&center) {
        return Err(Error::param(
            "center",
            format!("{center} outside [0, {}]", grid.x_max()),
        ));
    }
    let raw = grid.sample(|x| (-(x - center).powi(2) / eps).exp());
    let mass = grid.integrate_values(&raw);
    if !(mass > 0.0) {
        return Err(Error::param("eps", "bump underflows on this grid"));
    }
    let scale = target_mass / mass;
    DensityField::new(grid, raw.into_iter().map(|v| v * scale).collect())
}

/// `u = eps * ln n` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LogField {
    grid: Grid,
    values: Vec<f64>,
}

impl LogField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Inverse transform `n = exp(u / eps)`.
    pub fn inverse(&self, eps: f64) -> Result<DensityField> {
        if !(eps > 0.0) {
            return Err(Error::param("eps", format!("must be positive, got {eps}")));
        }
        DensityField::new(
            self.grid,
            self.values.iter().map(|u| (u / eps).exp()).collect(),
        )
    }
}

/// Hopf-Cole transform with values floored at `floor` before the logarithm.
pub fn hopf_cole(n: &DensityField, eps: f64, floor: f64) -> Result<LogField> {
    if !(eps > 0.0) {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    if !(floor > 0.0) {
        return Err(Error::param(
            "floor",
            format!("must be positive, got {floor}"),
        ));
    }
    Ok(LogField {
        grid: n.grid,
        values: n.values.iter().map(|v| eps * v.max(floor).ln()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn small_grid_nodes() {
        let g = Grid::new(4, 1.0).unwrap();
        assert_eq!(g.nodes(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn fine_grid_spacing() {
        let g = Grid::new(4000, 1.0).unwrap();
        assert_eq!(g.dx(), 0.00025);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(4000), 1.0);
        for i in 0..g.m() {
            assert!((g.node(i + 1) - g.node(i) - g.dx()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::new(1, 1.0).is_err());
        assert!(Grid::new(10, 0.0).is_err());
        assert!(Grid::new(10, -1.0).is_err());
    }

    #[test]
    fn trapezoid_on_simple_integrands() {
        let g = Grid::new(10, 1.0).unwrap();
        assert_relative_eq!(
            integrate(&DensityField::from_fn(g, |_| 1.0).unwrap()),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            integrate(&DensityField::from_fn(g, |x| x).unwrap()),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn trapezoid_on_parabola() {
        // trapezoid error for x^2 on [0,1] is dx^2 / 6
        let g = Grid::new(4000, 1.0).unwrap();
        let v = integrate(&DensityField::from_fn(g, |x| x * x).unwrap());
        assert!((v - 1.0 / 3.0).abs() < 1e-7);
        assert_relative_eq!(v - 1.0 / 3.0, g.dx() * g.dx() / 6.0, max_relative = 1e-6);
    }

    #[test]
    fn bump_mass_and_peak() {
        let g = Grid::new(4000, 1.0).unwrap();
        let b = gaussian_bump(g, 0.7, 0.01, 1.0).unwrap();
        assert!((integrate(&b) - 1.0).abs() < 1e-12);
        assert_eq!(b.argmax_index(), g.nearest_index(0.7));
    }

    #[test]
    fn paired_half_mass_bumps_sum_to_one() {
        let g = Grid::new(2000, 1.0).unwrap();
        let h = gaussian_bump(g, 0.5, 0.01, 0.5).unwrap();
        let c = gaussian_bump(g, 0.5, 0.01, 0.5).unwrap();
        assert!((integrate(&h) + integrate(&c) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bump_rejects_bad_parameters() {
        let g = Grid::new(100, 1.0).unwrap();
        assert!(gaussian_bump(g, 0.5, 0.0, 1.0).is_err());
        assert!(gaussian_bump(g, 0.5, 0.01, 0.0).is_err());
        assert!(gaussian_bump(g, 1.5, 0.01, 1.0).is_err());
    }

    #[test]
    fn hopf_cole_of_unit_density_is_zero() {
        let g = Grid::new(50, 1.0).unwrap();
        let u = hopf_cole(
            &DensityField::from_fn(g, |_| 1.0).unwrap(),
            0.01,
            DEFAULT_LOG_FLOOR,
        )
        .unwrap();
        assert!(u.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn hopf_cole_floor_absorbs_zeros() {
        let g = Grid::new(4, 1.0).unwrap();
        let n = DensityField::new(g, vec![0.0, 1.0, 2.0, 0.0, 3.0]).unwrap();
        let u = hopf_cole(&n, 0.1, 1e-300).unwrap();
        assert!(u.values().iter().all(|v| v.is_finite()));
        assert_relative_eq!(u.values()[0], 0.1 * 1e-300f64.ln());
    }

    #[test]
    fn argmax_ties_take_lowest_index() {
        let g = Grid::new(4, 1.0).unwrap();
        let n = DensityField::new(g, vec![1.0, 3.0, 3.0, 2.0, 0.0]).unwrap();
        assert_eq!(n.argmax_index(), 1);
    }

    #[test]
    fn rejects_negative_or_nonfinite_density() {
        let g = Grid::new(2, 1.0).unwrap();
        assert!(DensityField::new(g, vec![1.0, -1.0, 1.0]).is_err());
        assert!(DensityField::new(g, vec![1.0, f64::NAN, 1.0]).is_err());
        assert!(DensityField::new(g, vec![1.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn integrate_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0, k in 0.1f64..10.0) {
            let g = Grid::new(257, 2.0).unwrap();
            let f = g.sample(|x| (k * x).sin().abs() + 0.1);
            let h = g.sample(|x| x * x + k);
            let combo: Vec<f64> = f.iter().zip(&h).map(|(u, v)| a * u + b * v).collect();
            let lhs = g.integrate_values(&combo);
            let rhs = a * g.integrate_values(&f) + b * g.integrate_values(&h);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())));
        }

        #[test]
        fn bump_mass_is_exact(center in 0.0f64..1.0, eps in 0.001f64..1.0, mass in 1e-3f64..1e3) {
            let g = Grid::new(1000, 1.0).unwrap();
            let b = gaussian_bump(g, center, eps, mass).unwrap();
            prop_assert!((integrate(&b) / mass - 1.0).abs() < 1e-12);
        }

        #[test]
        fn hopf_cole_round_trip(values in proptest::collection::vec(1e-200f64..1e200, 11), eps in 0.001f64..2.0) {
            let g = Grid::new(10, 1.0).unwrap();
            let n = DensityField::new(g, values).unwrap();
            let u = hopf_cole(&n, eps, DEFAULT_LOG_FLOOR).unwrap();
            let back = u.inverse(eps).unwrap();
            for (a, b) in n.values().iter().zip(back.values()) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs());
            }
            prop_assert!((u.max() - eps * n.max().ln()).abs() <= 1e-12 * (1.0 + u.max().abs()));
        }
    }
}
