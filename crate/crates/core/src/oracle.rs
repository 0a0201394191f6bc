//! Closed-form predictions: homeostatic mass, fittest traits, and the
//! constant-dose analysis for
//!
//! `R_c(x) = r0^2 / (1 + x^2) - d - alpha^2 / (a^2 + x^2)`, `alpha^2 = c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelMatrix;
use crate::mono::{net_growth, MonoModelSpec};

const BISECTION_TOL: f64 = 1e-12;

/// Total healthy mass where `r0 / (1 + rho)^beta = d0`.
///
/// Balanced rates (`r0 == d0`) give zero; `r0 < d0` has no nonnegative solution.
pub fn homeostasis_rho(r0: f64, d0: f64, beta: f64) -> Result<f64> {
    if !(d0 > 0.0) {
        return Err(Error::param("d0", format!("must be positive, got {d0}")));
    }
    if !(beta > 0.0) {
        return Err(Error::param(
            "beta",
            format!("must be positive, got {beta}"),
        ));
    }
    if r0 < d0 {
        return Err(Error::param(
            "r0",
            format!("birth {r0} below death {d0}: no positive homeostasis"),
        ));
    }
    Ok((r0 / d0).powf(1.0 / beta) - 1.0)
}

/// Root of the homeostatic balance `r(x)/(1+rho)^beta - d(x) - c mu(x) = 0`
/// on `[0, x_max]`, by bisection.
pub fn fittest_trait_from_rho(spec: &MonoModelSpec, rho: f64, x_max: f64) -> Result<f64> {
    let f = |x: f64| net_growth(spec, x, rho, spec.dose);
    bisect(f, 0.0, x_max).ok_or(Error::NoRoot { x_max })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Smaller nonnegative trait solving `R_c(x) = I`.
///
/// In `y = x^2` the equation is `aq y^2 + bq y + cq = 0` with
/// `aq = I + d`, `bq = alpha^2 - r0^2 + (I + d)(1 + a^2)`,
/// `cq = alpha^2 - r0^2 a^2 + (I + d) a^2`.
pub fn concentration_from_i(r0: f64, d: f64, a: f64, alpha: f64, i: f64) -> Option<f64> {
    let r2 = r0 * r0;
    let a2 = a * a;
    let al2 = alpha * alpha;
    let s = i + d;
    let aq = s;
    let bq = al2 - r2 + s * (1.0 + a2);
    let cq = al2 - r2 * a2 + s * a2;

    let roots: Vec<f64> = if aq == 0.0 {
        if bq == 0.0 {
            vec![]
        } else {
            vec![-cq / bq]
        }
    } else {
        let mut disc = bq * bq - 4.0 * aq * cq;
        // within rounding of bq and cq a double root is indistinguishable
        // from a close pair or no root; take the double root
        let b_scale = al2 + r2 + s.abs() * (1.0 + a2);
        let c_scale = al2 + r2 * a2 + s.abs() * a2;
        let rounding = 64.0 * f64::EPSILON * (bq.abs() * b_scale + 4.0 * aq.abs() * c_scale);
        if disc.abs() <= rounding {
            disc = 0.0;
        }
        if disc < 0.0 {
            vec![]
        } else {
            let sq = disc.sqrt();
            let mut r = vec![(-bq - sq) / (2.0 * aq), (-bq + sq) / (2.0 * aq)];
            r.sort_by(f64::total_cmp);
            r
        }
    };
    roots.into_iter().find(|y| *y >= 0.0).map(f64::sqrt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoseRegime {
    /// `alpha >= r0`: fitness never exceeds `-d`.
    StrongDoseNoResistance,
    /// `alpha <= a^2 r0`: fitness is maximal at `x = 0`.
    WeakDoseNoResistance,
    /// `a^2 r0 < alpha < r0`: a resistant trait `x_c > 0` is selected.
    InteriorMaximum,
}

impl DoseRegime {
    pub fn label(&self) -> &'static str {
        match self {
            DoseRegime::StrongDoseNoResistance => "strong-dose-no-resistance",
            DoseRegime::WeakDoseNoResistance => "weak-dose-no-resistance",
            DoseRegime::InteriorMaximum => "interior-maximum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoseAnalysis {
    pub alpha: f64,
    pub regime: DoseRegime,
    pub y_c: Option<f64>,
    pub x_c: Option<f64>,
    /// Supremum of the fitness over the trait.
    pub r_bar: f64,
}

/// Fitness `R_c(x)` of the rational model.
pub fn rational_fitness(r0: f64, d: f64, a: f64, alpha: f64, x: f64) -> f64 {
    r0 * r0 / (1.0 + x * x) - d - alpha * alpha / (a * a + x * x)
}

pub fn dose_analysis(r0: f64, d: f64, a: f64, c: f64) -> Result<DoseAnalysis> {
    if !(c > 0.0) {
        return Err(Error::param("c", format!("must be positive, got {c}")));
    }
    dose_analysis_alpha(r0, d, a, c.sqrt())
}

/// [`dose_analysis`] parameterized by `alpha = sqrt(c)`.
pub fn dose_analysis_alpha(r0: f64, d: f64, a: f64, alpha: f64) -> Result<DoseAnalysis> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param("a", format!("must lie in (0, 1), got {a}")));
    }
    if !(r0 > 0.0) {
        return Err(Error::param("r0", format!("must be positive, got {r0}")));
    }
    if !(d > 0.0) {
        return Err(Error::param("d", format!("must be positive, got {d}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::param(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    let a2 = a * a;
    let analysis = if alpha >= r0 {
        DoseAnalysis {
            alpha,
            regime: DoseRegime::StrongDoseNoResistance,
            y_c: None,
            x_c: None,
            r_bar: -d,
        }
    } else if alpha <= a2 * r0 {
        DoseAnalysis {
            alpha,
            regime: DoseRegime::WeakDoseNoResistance,
            y_c: None,
            x_c: None,
            r_bar: rational_fitness(r0, d, a, alpha, 0.0),
        }
    } else {
        let y_c = (alpha - a2 * r0) / (r0 - alpha);
        DoseAnalysis {
            alpha,
            regime: DoseRegime::InteriorMaximum,
            y_c: Some(y_c),
            x_c: Some(y_c.sqrt()),
            r_bar: (alpha - r0).powi(2) / (1.0 - a2) - d,
        }
    };
    Ok(analysis)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoseRow {
    pub c: f64,
    pub analysis: DoseAnalysis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoseOptimization {
    /// Dose minimizing the maximal fitness; ties go to the smallest dose.
    pub c_star: f64,
    pub table: Vec<DoseRow>,
    /// `r0^2`: every dose at or above it gives `R_bar = -d`.
    pub threshold_c: f64,
}

pub fn optimal_dose(r0: f64, d: f64, a: f64, c_grid: &[f64]) -> Result<DoseOptimization> {
    if c_grid.is_empty() {
        return Err(Error::param("c_grid", "must not be empty"));
    }
    let table = c_grid
        .iter()
        .map(|&c| dose_analysis(r0, d, a, c).map(|analysis| DoseRow { c, analysis }))
        .collect::<Result<Vec<_>>>()?;
    let best = table
        .iter()
        .min_by(|p, q| {
            p.analysis
                .r_bar
                .total_cmp(&q.analysis.r_bar)
                .then(p.c.total_cmp(&q.c))
        })
        .expect("nonempty table");
    Ok(DoseOptimization {
        c_star: best.c,
        threshold_c: r0 * r0,
        table,
    })
}

/// `H(x, p) = r(x) int M~(x, z) exp(p z) dz` at grid node `node`, with
/// `z = (x - x') / eps` over the kernel row of `x`.
pub fn hamiltonian(spec: &MonoModelSpec, kernel: &KernelMatrix, node: usize, p: f64) -> f64 {
    let grid = kernel.grid();
    let x = grid.node(node);
    let row = kernel.row(node);
    let integral: f64 = row
        .weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let i = row.start + k;
            grid.weight(i) * w * (p * (x - grid.node(i)) / spec.eps).exp()
        })
        .sum();
    spec.r.eval(x) * integral
}
