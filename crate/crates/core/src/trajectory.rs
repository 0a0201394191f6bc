use serde::Serialize;

use crate::grid::DensityField;

/// Diagnostics of one population at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub t: f64,
    /// Mass of the evolved field (1 in renormalized runs).
    pub rho: f64,
    /// Natural log of the population mass, tracked across renormalizations.
    pub log_rho: f64,
    /// Argmax trait.
    pub xbar: f64,
    pub mean_trait: f64,
    /// Fitness average for single-population cancer runs, competition
    /// integral for the two-population model.
    pub fitness_avg: Option<f64>,
    /// Fitness average without the dose term (cancer runs only).
    pub dose_free_avg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub density: DensityField,
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub records: Vec<Record>,
    pub snapshots: Vec<Snapshot>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub(crate) fn push_record(&mut self, record: Record) {
        if let Some(last) = self.records.last() {
            debug_assert!(record.t > last.t, "record times must increase");
        }
        self.records.push(record);
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    pub fn final_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.t)
    }
}

/// Upper-tail warning: more than 0.1% of the mass in the top 2% of the domain.
pub(crate) fn boundary_warning(label: &str, t: f64, n: &DensityField) -> Option<String> {
    let frac = n.upper_tail_mass_fraction(0.02);
    (frac > 1e-3).then(|| {
        let msg = format!(
            "{label}: {:.3}% of the mass sits in the top 2% of the trait domain at t = {t}; the truncation at x_max may matter",
            100.0 * frac
        );
        log::warn!("{msg}");
        msg
    })
}
