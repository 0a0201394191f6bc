//! Structural assumption checks on model specs. Monotonicity is checked on the
//! sampled rates, so a report only speaks for the grid it was built on.

use std::fmt;

use serde::Serialize;

use crate::combo::ComboModelSpec;
use crate::grid::Grid;
use crate::mono::MonoModelSpec;
use crate::rates::RateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub id: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    fn push(&mut self, id: &'static str, ok: bool, detail: impl Into<String>) {
        self.checks.push(AssumptionCheck {
            id,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
        });
    }

    fn skip(&mut self, id: &'static str, detail: impl Into<String>) {
        self.checks.push(AssumptionCheck {
            id,
            status: CheckStatus::NotApplicable,
            detail: detail.into(),
        });
    }

    pub fn get(&self, id: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn status(&self, id: &str) -> Option<CheckStatus> {
        self.get(id).map(|c| c.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Logs each failed check at warn level.
    pub fn log_failures(&self) {
        for c in self.failures() {
            log::warn!("assumption {} violated: {}", c.id, c.detail);
        }
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotApplicable => "n/a",
            };
            writeln!(f, "{:<4} {:<4} {}", c.id, tag, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ModelRef<'a> {
    Mono(&'a MonoModelSpec),
    Combo(&'a ComboModelSpec),
}

impl<'a> From<&'a MonoModelSpec> for ModelRef<'a> {
    fn from(s: &'a MonoModelSpec) -> Self {
        ModelRef::Mono(s)
    }
}

impl<'a> From<&'a ComboModelSpec> for ModelRef<'a> {
    fn from(s: &'a ComboModelSpec) -> Self {
        ModelRef::Combo(s)
    }
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn positive(v: &[f64]) -> bool {
    v.iter().all(|&x| x > 0.0)
}

fn shape(name: &str, rate: &RateSpec) -> String {
    format!("{name} = {rate}")
}

pub fn validate_assumptions<'a>(model: impl Into<ModelRef<'a>>, grid: &Grid) -> AssumptionReport {
    match model.into() {
        ModelRef::Mono(s) => mono_report(s, grid),
        ModelRef::Combo(s) => combo_report(s, grid),
    }
}

fn mono_report(s: &MonoModelSpec, grid: &Grid) -> AssumptionReport {
    let mut rep = AssumptionReport::default();
    let r = s.r.sample(grid);
    let d = s.d.sample(grid);
    let mu = s.mu.sample(grid);

    rep.push(
        "as1",
        r[0] > d[0] && d[0] > 0.0 && nonincreasing(&r) && nondecreasing(&d),
        format!(
            "need r(0) > d(0) > 0, r nonincreasing, d nondecreasing; {}, {}",
            shape("r", &s.r),
            shape("d", &s.d)
        ),
    );

    if s.dose == 0.0 && mu.iter().all(|&m| m == 0.0) {
        rep.skip("as2", "no drug response configured");
    } else {
        rep.push(
            "as2",
            positive(&mu) && nonincreasing(&mu),
            format!("need mu > 0 and nonincreasing; {}", shape("mu", &s.mu)),
        );
    }

    if s.dose == 0.0 {
        rep.skip("as3", "dose c = 0");
    } else {
        let v = r[0] - d[0] - s.dose * mu[0];
        rep.push("as3", v < 0.0, format!("r(0) - d(0) - c mu(0) = {v:.6}"));
    }
    rep
}

fn combo_report(s: &ComboModelSpec, grid: &Grid) -> AssumptionReport {
    let mut rep = AssumptionReport::default();
    let r_h = s.r_h.sample(grid);
    let r_c = s.r_c.sample(grid);
    let d_h = s.d_h.sample(grid);
    let d_c = s.d_c.sample(grid);
    let mu_h = s.mu_h.sample(grid);
    let mu_c = s.mu_c.sample(grid);

    rep.push(
        "as2",
        positive(&mu_h)
            && positive(&mu_c)
            && nonincreasing(&mu_h)
            && nonincreasing(&mu_c)
            && mu_h.iter().zip(&mu_c).all(|(h, c)| h < c),
        format!(
            "need mu_H, mu_C > 0, nonincreasing, mu_H < mu_C; {}, {}",
            shape("mu_H", &s.mu_h),
            shape("mu_C", &s.mu_c)
        ),
    );
    rep.push(
        "A2",
        s.a_hh > 0.0
            && s.a_cc > 0.0
            && s.a_hc >= 0.0
            && s.a_ch >= 0.0
            && s.a_hh > s.a_hc
            && s.a_cc > s.a_ch,
        format!(
            "a_HH = {}, a_HC = {}, a_CH = {}, a_CC = {}",
            s.a_hh, s.a_hc, s.a_ch, s.a_cc
        ),
    );
    rep.push(
        "A3",
        positive(&r_h) && positive(&r_c) && nonincreasing(&r_h) && nonincreasing(&r_c),
        format!(
            "need r_H, r_C > 0 and nonincreasing; {}, {}",
            shape("r_H", &s.r_h),
            shape("r_C", &s.r_c)
        ),
    );
    rep.push(
        "A4",
        positive(&d_h) && positive(&d_c) && nonincreasing(&d_h) && nonincreasing(&d_c),
        format!(
            "need d_H, d_C > 0 and nonincreasing; {}, {}",
            shape("d_H", &s.d_h),
            shape("d_C", &s.d_c)
        ),
    );
    rep.push(
        "A6",
        s.alpha_h < s.alpha_c,
        format!("alpha_H = {}, alpha_C = {}", s.alpha_h, s.alpha_c),
    );
    rep
}
