use resistevo_bench::{bump, combination, healthy_with_mutation, resistance};

#[test]
fn fixtures_build_and_step() {
    for m in [1000, 4000] {
        assert!((resistevo::integrate(&bump(m)) - 1.0).abs() < 1e-12);
        let (solver, state) = healthy_with_mutation(m);
        assert!(solver.kernel().is_some());
        let next = solver.step_imex(&state, 1e-3).unwrap();
        assert!(next.n.min() > 0.0);

        let (solver, state) = resistance(m);
        let next = solver.step_renormalized(&state, 1e-3).unwrap();
        assert!((next.rho - 1.0).abs() < 1e-10);

        let (solver, state) = combination(m, 1.0, 1.0);
        let next = solver.step(&state, 0.1).unwrap();
        assert!(next.rho_h > 0.0 && next.rho_c > 0.0);
    }
}
