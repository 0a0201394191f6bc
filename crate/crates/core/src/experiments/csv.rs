//! CSV emission. Numbers use 17 significant digits so values read back
//! bit-exactly; missing values are written as `nan`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::combo::SweepTable;
use crate::error::{Error, Result};
use crate::oracle::DoseOptimization;
use crate::trajectory::Snapshot;

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn opt(v: Option<f64>) -> String {
    fmt_num(v.unwrap_or(f64::NAN))
}

pub const TIMESERIES_HEADER: [&str; 9] = [
    "t",
    "rho_H",
    "rho_C",
    "xbar_H",
    "xbar_C",
    "I_H_or_I",
    "I_C",
    "log_rho_H",
    "log_rho_C",
];

/// One row of `timeseries.csv`; unused columns hold NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeseriesRow {
    pub t: f64,
    pub rho_h: f64,
    pub rho_c: f64,
    pub xbar_h: f64,
    pub xbar_c: f64,
    pub i_h_or_i: f64,
    pub i_c: f64,
    pub log_rho_h: f64,
    pub log_rho_c: f64,
}

impl TimeseriesRow {
    pub fn empty(t: f64) -> Self {
        TimeseriesRow {
            t,
            rho_h: f64::NAN,
            rho_c: f64::NAN,
            xbar_h: f64::NAN,
            xbar_c: f64::NAN,
            i_h_or_i: f64::NAN,
            i_c: f64::NAN,
            log_rho_h: f64::NAN,
            log_rho_c: f64::NAN,
        }
    }

    fn fields(&self) -> [f64; 9] {
        [
            self.t,
            self.rho_h,
            self.rho_c,
            self.xbar_h,
            self.xbar_c,
            self.i_h_or_i,
            self.i_c,
            self.log_rho_h,
            self.log_rho_c,
        ]
    }
}

fn writer(path: &Path) -> Result<::csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|source| io_err(path, source))?;
    Ok(::csv::Writer::from_writer(BufWriter::new(file)))
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path, e: ::csv::Error) -> Error {
    io_err(path, std::io::Error::other(e))
}

fn finish(path: &Path, w: ::csv::Writer<BufWriter<File>>) -> Result<()> {
    let mut inner = w.into_inner().map_err(|e| io_err(path, e.into_error()))?;
    inner.flush().map_err(|e| io_err(path, e))
}

pub fn write_timeseries(path: &Path, rows: &[TimeseriesRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(TIMESERIES_HEADER)
        .map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.fields().map(fmt_num))
            .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

/// Long format `population,t,x,n`, one line per node per saved frame.
pub fn write_snapshots(path: &Path, frames: &[(&str, &Snapshot)], normalize: bool) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["population", "t", "x", "n"])
        .map_err(|e| csv_err(path, e))?;
    for (population, snap) in frames {
        let density = if normalize {
            snap.density
                .normalized()
                .unwrap_or_else(|_| snap.density.clone())
        } else {
            snap.density.clone()
        };
        let grid = density.grid();
        let t = fmt_num(snap.t);
        for (i, v) in density.values().iter().enumerate() {
            w.write_record([population, t.as_str(), &fmt_num(grid.node(i)), &fmt_num(*v)])
                .map_err(|e| csv_err(path, e))?;
        }
    }
    finish(path, w)
}

/// `t,<driver>,x_oracle`: the trait predicted from the driving quantity at each time.
pub fn write_oracle(path: &Path, driver: &str, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", driver, "x_oracle"])
        .map_err(|e| csv_err(path, e))?;
    for (t, v, x) in rows {
        w.write_record([fmt_num(*t), fmt_num(*v), fmt_num(*x)])
            .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

pub fn write_dose_table(path: &Path, opt_dose: &DoseOptimization) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["c", "alpha", "regime", "y_c", "x_c", "R_bar"])
        .map_err(|e| csv_err(path, e))?;
    for row in &opt_dose.table {
        let a = &row.analysis;
        w.write_record([
            fmt_num(row.c),
            fmt_num(a.alpha),
            a.regime.label().to_string(),
            opt(a.y_c),
            opt(a.x_c),
            fmt_num(a.r_bar),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

/// Failed rows carry NaN values and `failed` in the `eradicated` column.
pub fn write_sweep_table(path: &Path, table: &SweepTable) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "c1",
        "c2",
        "rho_H_final",
        "rho_C_final",
        "xbar_C_final",
        "eradicated",
    ])
    .map_err(|e| csv_err(path, e))?;
    for row in &table.rows {
        let (vals, flag) = match &row.outcome {
            Ok(o) => ([o.rho_h, o.rho_c, o.xbar_c], o.eradicated.to_string()),
            Err(_) => ([f64::NAN; 3], "failed".to_string()),
        };
        w.write_record([
            fmt_num(row.c1),
            fmt_num(row.c2),
            fmt_num(vals[0]),
            fmt_num(vals[1]),
            fmt_num(vals[2]),
            flag,
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(4.0), "4.0000000000000000e0");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(-0.025), "-2.5000000000000001e-2");
    }

    proptest! {
        #[test]
        fn numbers_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = fmt_num(v).parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
