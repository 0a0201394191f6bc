use approx::assert_relative_eq;
use proptest::prelude::*;
use resistevo::combo::paired_initial_data;
use resistevo::{
    dose_grid_sweep, integrate, net_growth_pair, validate_assumptions, CheckStatus, ComboModelSpec,
    ComboSolver, Grid, RateSpec,
};

fn solver(m: usize, spec: ComboModelSpec) -> ComboSolver {
    ComboSolver::new(spec, Grid::new(m, 1.0).unwrap()).unwrap()
}

/// Rates written out from the model definition, independent of the library.
fn reference_pair(x: f64, i_h: f64, i_c: f64, c1: f64, c2: f64) -> (f64, f64) {
    let q = 1.0 + x * x;
    let rh =
        1.5 / q * 0.9 / (1.0 + 0.01 * c2) - 0.5 * (1.0 - 0.1 * x) * i_h - 0.2 / (0.49 + x * x) * c1;
    let rc = 3.0 / q * 0.9 / (1.0 + c2) - 0.5 * (1.0 - 0.3 * x) * i_c - 0.4 / (0.49 + x * x) * c1;
    (rh, rc)
}

#[test]
fn net_growth_pair_examples() {
    let (rh, rc) = net_growth_pair(&ComboModelSpec::standard(0.0, 0.0), 0.0, 0.5, 0.5);
    assert_relative_eq!(rh, 1.1, max_relative = 1e-14);
    assert_relative_eq!(rc, 2.45, max_relative = 1e-14);
    let (rh, rc) = net_growth_pair(&ComboModelSpec::standard(1.0, 0.0), 0.0, 0.0, 0.0);
    assert!((rh - 0.94184).abs() < 1e-5 && (rc - 1.88367).abs() < 1e-5);
}

#[test]
fn standard_spec_satisfies_its_assumptions() {
    let g = Grid::new(1000, 1.0).unwrap();
    let spec = ComboModelSpec::standard(1.0, 1.0);
    let report = validate_assumptions(&spec, &g);
    assert!(report.all_pass(), "{report}");
    let bad = ComboModelSpec {
        a_hc: 2.0,
        alpha_h: 3.0,
        ..spec
    };
    let report = validate_assumptions(&bad, &g);
    assert_eq!(report.status("A2"), Some(CheckStatus::Fail));
    assert_eq!(report.status("A6"), Some(CheckStatus::Fail));
}

#[test]
fn one_step_mass_change_is_second_order_in_dt() {
    let s = solver(400, ComboModelSpec::standard(5.0, 1.0));
    let (h, c) = paired_initial_data(*s.grid(), 0.5, 0.01, 0.5, 0.5).unwrap();
    let state = s.state(0.0, h, c).unwrap();
    let (rate_h, rate_c) = s.mass_rates(&state);
    let defect = |dt: f64| {
        let next = s.step(&state, dt).unwrap();
        (
            (next.rho_h - state.rho_h - dt * rate_h).abs(),
            (next.rho_c - state.rho_c - dt * rate_c).abs(),
        )
    };
    let (e1, e2) = (defect(1e-3), defect(5e-4));
    for (a, b) in [(e1.0, e2.0), (e1.1, e2.1)] {
        let ratio = a / b;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn mutation_conserves_mass_with_constant_birth() {
    let spec = ComboModelSpec {
        r_h: RateSpec::constant(1.5),
        r_c: RateSpec::constant(3.0),
        ..ComboModelSpec::standard(0.0, 2.0)
    };
    let s = solver(1000, spec);
    let (h, c) = paired_initial_data(*s.grid(), 0.3, 0.05, 0.5, 0.5).unwrap();
    let (bh, bc) = s.mutation_mass_balance(&s.state(0.0, h, c).unwrap());
    assert!(bh.abs() < 1e-10 && bc.abs() < 1e-10, "{bh} {bc}");
}

#[test]
fn sweep_rows_follow_input_order_and_flag_eradication() {
    let spec = ComboModelSpec::standard(0.0, 0.0);
    let g = Grid::new(400, 1.0).unwrap();
    let (h, c) = paired_initial_data(g, 0.5, 0.01, 0.5, 0.5).unwrap();
    let table =
        dose_grid_sweep(&spec, (&h, &c), &[2.0, 0.0], &[2.0, 0.0], 0.1, 2000, 1e-3).unwrap();
    let order: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.c1, r.c2)).collect();
    assert_eq!(order, vec![(2.0, 2.0), (2.0, 0.0), (0.0, 2.0), (0.0, 0.0)]);
    assert!(table.rows[0].outcome.as_ref().unwrap().eradicated);
    assert!(!table.rows[3].outcome.as_ref().unwrap().eradicated);
    let again =
        dose_grid_sweep(&spec, (&h, &c), &[2.0, 0.0], &[2.0, 0.0], 0.1, 2000, 1e-3).unwrap();
    assert_eq!(table, again);
}

#[test]
fn cytostatic_factor_strictly_decreases() {
    let mut last = (f64::INFINITY, f64::INFINITY);
    for k in 0..50 {
        let f = ComboModelSpec::standard(0.0, 0.25 * k as f64).cytostatic_factors();
        assert!(f.0 < last.0 && f.1 < last.1);
        last = f;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn positive_with_coherent_caches_over_2000_steps(c1 in 0.0..4.0f64, c2 in 0.0..8.0f64) {
        let spec = ComboModelSpec::standard(c1, c2);
        let s = solver(400, spec.clone());
        let (h, c) = paired_initial_data(*s.grid(), 0.5, 0.01, 0.5, 0.5).unwrap();
        let mut state = s.state(0.0, h, c).unwrap();
        for _ in 0..2000 {
            state = s.step(&state, 0.1).unwrap();
            prop_assert!(state.n_h.min() > 0.0 && state.n_c.min() > 0.0);
            let (rh, rc) = (integrate(&state.n_h), integrate(&state.n_c));
            prop_assert!((state.rho_h - rh).abs() <= 1e-12 * rh);
            prop_assert!((state.rho_c - rc).abs() <= 1e-12 * rc);
            prop_assert!((state.i_h - (spec.a_hh * rh + spec.a_hc * rc)).abs() < 1e-12 * (1.0 + state.i_h));
            prop_assert!((state.i_c - (spec.a_ch * rh + spec.a_cc * rc)).abs() < 1e-12 * (1.0 + state.i_c));
        }
    }

    #[test]
    fn growth_pair_matches_reference(x in 0.0..1.0f64, i_h in 0.0..5.0f64, i_c in 0.0..5.0f64, c1 in 0.0..5.0f64, c2 in 0.0..10.0f64) {
        let got = net_growth_pair(&ComboModelSpec::standard(c1, c2), x, i_h, i_c);
        let want = reference_pair(x, i_h, i_c, c1, c2);
        prop_assert!((got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12);
    }
}
