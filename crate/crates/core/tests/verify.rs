use psiflow_core::*;

#[test]
fn negative_controls_fail_and_stall() {
    let f = FnField(|_: f64, _: f64, _: f64| 0.0);
    let pts = sample_points(&f, 50, &SampleDomain::default()).unwrap();
    for (name, c) in negative_controls() {
        let r = pde_residual(&*c, &pts, 1.0, &FdScheme::default()).unwrap();
        assert!(!r.passes(1e-2), "{name}");
        assert!(r.max_abs > 1.0, "{name}: {}", r.max_abs);
        assert!(r.non_decreasing_under_refinement(), "{name}: {:?}", r.per_level);
    }
}

#[test]
fn true_solutions_shrink_under_refinement() {
    let s = preset("eq37", &PresetParams::default()).unwrap();
    let pts = sample_points(&s, 50, &SampleDomain::default()).unwrap();
    let r = pde_residual(&s, &pts, 1.0, &FdScheme::default()).unwrap();
    assert!(!r.non_decreasing_under_refinement());
    assert!(r.per_level[1] / r.per_level[0] > 3.5);
    assert!(r.rms <= r.max_abs);
    assert!(r.residuals.iter().all(|v| v.abs() <= r.max_abs));
}

#[test]
fn harmonic_and_pde_classifications_agree() {
    let cfg = SuiteConfig::default();
    for name in ["eq13", "eq30", "eq35", "eq37", "eq39a", "eq39b", "uniform"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        let out = run_suites(&s, &cfg).unwrap();
        assert_eq!(out.len(), 2, "{name}");
        assert!(out.iter().all(|o| o.passed), "{name}");
    }
}

#[test]
fn two_level_schemes_report_no_order() {
    let s = preset("eq30", &PresetParams::default()).unwrap();
    let pts = sample_points(&s, 10, &SampleDomain::default()).unwrap();
    let scheme = FdScheme::new(1e-2, 2.0, 2, StencilOrder::Second).unwrap();
    let r = pde_residual(&s, &pts, 1.0, &scheme).unwrap();
    assert_eq!(r.order_estimate, None);
    assert!(!r.passes(1e-2));
}

#[test]
fn fourth_order_scheme_reports_fourth_order() {
    let s = preset("eq37", &PresetParams::default()).unwrap();
    let pts = sample_points(&s, 20, &SampleDomain::default()).unwrap();
    let scheme = FdScheme::new(2e-2, 2.0, 3, StencilOrder::Fourth).unwrap();
    let r = pde_residual(&s, &pts, 1.0, &scheme).unwrap();
    let o = r.order_estimate.unwrap();
    assert!((3.8..=4.5).contains(&o), "{o} {:?}", r.per_level);
    assert!(r.passes(1e-2));
}

#[test]
fn wave_translation_is_exact() {
    let pi = std::f64::consts::PI;
    let grid = Grid::new(-pi, pi, -pi, pi, 101, 101).unwrap();
    for name in ["eq30", "eq37", "eq39a", "eq35"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        assert_eq!(wave_translation_check(&s, &grid, 0.0, 0.0).unwrap(), 0.0);
        for dt in [1.0, 10.0, 20.0] {
            let m = wave_translation_check(&s, &grid, 0.0, dt).unwrap();
            assert!(m <= 1e-10, "{name} dt={dt}: {m}");
        }
    }
    for name in ["eq28", "eq40a", "eq34", "eq33"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        assert!(matches!(wave_translation_check(&s, &grid, 0.0, 1.0), Err(Error::NotApplicable(_))), "{name}");
    }
}

#[test]
fn cross_correlation_recovers_phase_speed() {
    let pi = std::f64::consts::PI;
    let s = preset("eq30", &PresetParams::default()).unwrap();
    let grid = Grid::new(-pi, pi, -pi, pi, 101, 101).unwrap();
    let scheme = FdScheme::default();
    let f0 = sample_grid(&s, &grid, 0.0, Quantity::Psi, &scheme).unwrap();
    for dt in [1.0, 10.0, 20.0, 30.0] {
        let f1 = sample_grid(&s, &grid, dt, Quantity::Psi, &scheme).unwrap();
        let shift = x_shift_estimate(&f0, &f1, 25).unwrap();
        assert!((shift - 0.05 * dt).abs() <= grid.dx(), "dt={dt}: {shift}");
    }
}
