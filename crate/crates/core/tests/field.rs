use psiflow_core::*;

fn quiet() -> StreamSolution {
    make_general_traveling(WaveParams::catalog_defaults().with_constants(0.0, 0.0, 0.0, 5.0)).unwrap()
}

#[test]
fn pressure_gradient_examples() {
    let scheme = FdScheme::default();
    assert_eq!(pressure_gradient(&quiet(), 0.3, 0.2, 1.0, 1.0, &scheme).unwrap(), (0.0, 0.0));
    let u = preset("uniform", &PresetParams::default()).unwrap();
    let (px, py) = pressure_gradient(&u, 0.3, 0.2, 1.0, 1.0, &scheme).unwrap();
    assert!(px.abs() < 1e-12 && py.abs() < 1e-12);
    // Rankine vortex: ∇p = (4C²/r³) r̂
    let c = 0.8;
    let s = make_oseen_rankine(c, 0.0, 1.0, 1e-3).unwrap();
    for &(x, y) in &[(1.0_f64, 0.5_f64), (-0.7, 1.4), (2.0, -2.0)] {
        let r = x.hypot(y);
        let (px, py) = pressure_gradient(&s, x, y, 1.3, 1.0, &scheme).unwrap();
        let mag = 4.0 * c * c / r.powi(3);
        assert!((px - mag * x / r).abs() < 1e-8 * mag && (py - mag * y / r).abs() < 1e-8 * mag, "({x},{y}): {px} {py}");
    }
    // the same gradient from derivatives of ψ alone
    for name in ["eq28", "eq37", "eq41", "eq10"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        for &(x, y, t) in &[(0.9, -1.2, 1.0), (2.5, 1.0, 1.7)] {
            let a = pressure_gradient(&s, x, y, t, 1.0, &scheme).unwrap();
            let b = pressure_gradient_from_psi(&s, x, y, t, 1.0, &scheme).unwrap();
            let scale = a.0.hypot(a.1).max(1.0);
            assert!((a.0 - b.0).abs() <= 1e-5 * scale && (a.1 - b.1).abs() <= 1e-5 * scale, "{name}: {a:?} {b:?}");
        }
    }
}

#[test]
fn rankine_pressure_recovery() {
    let c = 0.8;
    let s = make_oseen_rankine(c, 0.0, 1.0, 1e-3).unwrap();
    let grid = Grid::new(0.5, 2.0, 0.5, 2.0, 151, 151).unwrap();
    let reference = PressureReference { x: 0.5, y: 0.5, p0: 1.0 };
    let p = recover_pressure(&s, &grid, 1.0, reference, 1.0, &FdScheme::default()).unwrap();
    assert_eq!(p.values[grid.index(0, 0)], Some(1.0));
    let exact = |x: f64, y: f64| -2.0 * c * c / (x * x + y * y);
    let span = (exact(2.0, 2.0) - exact(0.5, 0.5)).abs();
    for idx in 0..grid.len() {
        let (i, j) = grid.node(idx);
        let want = 1.0 + exact(grid.x(i), grid.y(j)) - exact(0.5, 0.5);
        let got = p.values[idx].unwrap();
        assert!((got - want).abs() <= 1e-3 * span, "({i},{j}): {got} vs {want}");
    }
}

#[test]
fn pressure_paths_agree() {
    for name in ["uniform", "eq30"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        let grid = Grid::square(1.0, 201).unwrap();
        let r = PressureReference { x: -1.0, y: -1.0, p0: 0.0 };
        let (abs, rel) = pressure_path_discrepancy(&s, &grid, 0.5, r, 1.0, &FdScheme::default()).unwrap();
        assert!(rel <= 1e-3, "{name}: {abs} {rel}");
    }
    let q = quiet();
    let grid = Grid::square(2.0, 31).unwrap();
    let r = PressureReference { x: 0.3, y: 0.0, p0: -2.0 };
    let p = recover_pressure(&q, &grid, 0.0, r, 1.0, &FdScheme::default()).unwrap();
    assert!(p.values.iter().all(|v| (v.unwrap() + 2.0).abs() <= 1e-12));
    let (_, rel) = pressure_path_discrepancy(&q, &grid, 0.0, r, 1.0, &FdScheme::default()).unwrap();
    assert_eq!(rel, 0.0);
}

#[test]
fn recovered_pressure_gradient_is_curl_free() {
    let s = preset("eq37", &PresetParams::default()).unwrap();
    let scheme = FdScheme::default();
    let at = (0.7, -0.9, 0.4);
    let curl = |h: f64| {
        let g = |x: f64, y: f64| pressure_gradient(&s, x, y, at.2, 1.0, &scheme).unwrap();
        let dpx_dy = (g(at.0, at.1 + h).0 - g(at.0, at.1 - h).0) / (2.0 * h);
        let dpy_dx = (g(at.0 + h, at.1).1 - g(at.0 - h, at.1).1) / (2.0 * h);
        dpx_dy - dpy_dx
    };
    let (c1, c2) = (curl(0.04), curl(0.02));
    let ratio = c1 / c2;
    assert!((ratio - 4.0).abs() < 0.4, "{c1} {c2}");
}

#[test]
fn harmonic_flows_are_irrotational() {
    let scheme = FdScheme::default();
    for name in ["eq30", "eq35", "eq37", "eq39a", "eq13"] {
        let s = preset(name, &PresetParams::default()).unwrap();
        for &(x, y, t) in &[(0.9, -1.2, 1.0), (2.5, 1.0, 1.7)] {
            let w = vorticity(&s, x, y, t, &scheme).unwrap();
            assert!(w.abs() <= 1e-4, "{name}: {w}");
        }
    }
}

#[test]
fn cosine_lattice_alternates_along_x() {
    let s = preset("eq30", &PresetParams::default()).unwrap();
    let tau = std::f64::consts::TAU;
    let grid = Grid::new(-tau, tau, -tau, tau, 101, 101).unwrap();
    let f = sample_grid(&s, &grid, 0.0, Quantity::Psi, &FdScheme::default()).unwrap();
    assert_eq!(f.masked_count(), 0);
    for j in [10, 50, 90] {
        let row: Vec<f64> = (0..grid.nx).map(|i| f.get(i, j).unwrap()).collect();
        let ext: Vec<f64> = (1..row.len() - 1)
            .filter(|&i| (row[i] - row[i - 1]) * (row[i + 1] - row[i]) < 0.0)
            .map(|i| row[i])
            .collect();
        // cos(2x) has a period of π: 8 interior extrema on [−2π, 2π]
        assert!(ext.len() >= 7, "{}", ext.len());
        for w in ext.windows(2) {
            assert!(w[0] * w[1] < 0.0);
        }
    }
}

#[test]
fn sample_grid_quantities_and_masks() {
    let s = make_oseen_rankine(0.5, 1.0, 1.0, 1e-3).unwrap();
    let grid = Grid::square(2.0, 21).unwrap();
    let scheme = FdScheme::default();
    for q in [Quantity::Psi, Quantity::U, Quantity::V] {
        let f = sample_grid(&s, &grid, 1.0, q, &scheme).unwrap();
        assert_eq!(f.masked_count(), 1, "{q}");
    }
    // derivative quantities also mask nodes whose stencil reaches the origin
    let w = sample_grid(&s, &grid, 1.0, Quantity::Vorticity, &scheme).unwrap();
    assert!(w.masked_count() >= 1 && w.masked_count() <= 9);
    let p = sample_grid(&s, &grid, 1.0, Quantity::Pressure, &scheme).unwrap();
    assert_eq!(p.get(0, 0), Some(0.0));
    assert!(p.masked_count() >= 1 && p.masked_count() <= 9);
    let u = sample_grid(&s, &grid, 1.0, Quantity::U, &scheme).unwrap();
    let (x, y) = (grid.x(15), grid.y(3));
    assert_eq!(u.get(15, 3), Some(velocity(&s, x, y, 1.0, &scheme).unwrap().u));
}

#[test]
fn sampling_is_reproducible() {
    let s = preset("eq41", &PresetParams::default()).unwrap();
    let grid: Grid = "-3:3:64x48".parse().unwrap();
    let a = sample_grid(&s, &grid, 1.0, Quantity::Vorticity, &FdScheme::default()).unwrap();
    let b = sample_grid(&s, &grid, 1.0, Quantity::Vorticity, &FdScheme::default()).unwrap();
    assert_eq!(a, b);
}
