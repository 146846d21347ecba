use std::f64::consts::PI;

use proptest::prelude::*;
use psiflow_core::numeric::{c_cos, c_exp, c_ln, c_pow, c_sin, c_tanh, Cplx};
use psiflow_core::{fd_partial, FdScheme, FnField, GroupElement, GroupKind, Partial, TimeFn};

fn cplx() -> impl Strategy<Value = Cplx> {
    (-50.0..50.0_f64, -50.0..50.0_f64).prop_map(|(a, b)| Cplx::new(a, b))
}

fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ln_stays_on_principal_branch(z in cplx()) {
        prop_assume!(z.norm() > 1e-6);
        let l = c_ln(z).unwrap();
        prop_assert!(l.im > -PI && l.im <= PI);
    }
}

proptest! {
    #[test]
    fn exp_inverts_ln(z in cplx()) {
        prop_assume!(z.norm() > 1e-3);
        prop_assert!(close(c_exp(c_ln(z).unwrap()), z, 1e-13));
    }

    #[test]
    fn pythagorean_identity(a in -5.0..5.0_f64, b in -5.0..5.0_f64) {
        let z = Cplx::new(a, b);
        let c = c_cos(z);
        let s = c_sin(z);
        prop_assert!(close(c * c + s * s, Cplx::ONE, 1e-10 * (1.0 + c.norm_sqr())));
    }

    #[test]
    fn integer_powers_are_repeated_products(a in -3.0..3.0_f64, b in -3.0..3.0_f64, n in 0u32..7) {
        let z = Cplx::new(a, b);
        let mut want = Cplx::ONE;
        for _ in 0..n {
            want = want * z;
        }
        prop_assert!(close(c_pow(z, n as f64).unwrap(), want, 1e-13));
    }

    #[test]
    fn tanh_is_sinh_over_cosh(a in -5.0..5.0_f64, b in -5.0..5.0_f64) {
        let z = Cplx::new(a, b);
        if let Ok(t) = c_tanh(z) {
            let e2 = c_exp(z.scale(2.0));
            let want = (e2 - Cplx::ONE) / (e2 + Cplx::ONE);
            prop_assert!(close(t, want, 1e-10));
        }
    }

    #[test]
    fn division_inverts_multiplication(a in cplx(), b in cplx()) {
        prop_assume!(b.norm() > 1e-3);
        prop_assert!(close((a * b) / b, a, 1e-13));
    }

    #[test]
    fn extrapolated_differences_are_exact_on_quartics(
        c in prop::collection::vec(-2.0..2.0_f64, 25),
        x in -1.0..1.0_f64, y in -1.0..1.0_f64, t in -1.0..1.0_f64,
        dx in 0u8..3, dy in 0u8..3, dt in 0u8..2,
    ) {
        prop_assume!(dx + dy + dt <= 4);
        // all monomials xⁱyʲtᵏ of total degree ≤ 4 with k ≤ 1
        let mono: Vec<(i32, i32, i32)> = (0..=4)
            .flat_map(|i| (0..=4).flat_map(move |j| (0..=1).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| i + j + k <= 4)
            .collect();
        prop_assert_eq!(mono.len(), c.len());
        let f = FnField(|x: f64, y: f64, t: f64| {
            mono.iter().zip(&c).map(|(&(i, j, k), a)| a * x.powi(i) * y.powi(j) * t.powi(k)).sum()
        });
        let fall = |n: i32, d: u8| -> f64 { (0..d as i32).map(|m| (n - m) as f64).product() };
        let want: f64 = mono.iter().zip(&c).map(|(&(i, j, k), a)| {
            if i < dx as i32 || j < dy as i32 || k < dt as i32 {
                return 0.0;
            }
            a * fall(i, dx) * fall(j, dy) * fall(k, dt)
                * x.powi(i - dx as i32) * y.powi(j - dy as i32) * t.powi(k - dt as i32)
        }).sum();
        let p = Partial::new(dx, dy, dt);
        let scheme = FdScheme::default().with_h(5e-2);
        let got = fd_partial(&f, p, (x, y, t), &scheme).unwrap().value;
        prop_assert!((got - want).abs() <= 1e-8 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

fn time_fns() -> impl Strategy<Value = TimeFn> {
    prop_oneof![
        (-2.0..2.0_f64).prop_map(TimeFn::Constant),
        (-2.0..2.0_f64).prop_map(TimeFn::Linear),
        (-2.0..2.0_f64).prop_map(TimeFn::Quadratic),
        (-2.0..2.0_f64, 0.1..3.0_f64).prop_map(|(a, b)| TimeFn::Sine { amplitude: a, frequency: b }),
    ]
}

fn element(kind: GroupKind, eps: f64, f: &TimeFn) -> GroupElement {
    let func = kind.needs_time_fn().then(|| f.clone());
    GroupElement::new(kind, eps, func).unwrap()
}

fn max_diff(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> f64 {
    [a.0 - b.0, a.1 - b.1, a.2 - b.2, a.3 - b.3].iter().fold(0.0, |m, d| m.max(d.abs()))
}

proptest! {
    #[test]
    fn group_law_composition(
        k in 0usize..7, e1 in -1.0..1.0_f64, e2 in -1.0..1.0_f64,
        x in -3.0..3.0_f64, y in -3.0..3.0_f64, t in 0.1..3.0_f64, psi in -5.0..5.0_f64,
        f in time_fns(),
    ) {
        let kind = GroupKind::ALL[k];
        let g1 = element(kind, e1, &f);
        let g2 = element(kind, e2, &f);
        let g12 = element(kind, e1 + e2, &f);
        let (a, b, c, d) = g2.forward(x, y, t, psi);
        let two_step = g1.forward(a, b, c, d);
        prop_assert!(max_diff(two_step, g12.forward(x, y, t, psi)) <= 1e-10);
    }

    #[test]
    fn group_law_inverse(
        k in 0usize..7, e in -1.0..1.0_f64,
        x in -3.0..3.0_f64, y in -3.0..3.0_f64, t in 0.1..3.0_f64, psi in -5.0..5.0_f64,
        f in time_fns(),
    ) {
        let g = element(GroupKind::ALL[k], e, &f);
        let (a, b, c, d) = g.forward(x, y, t, psi);
        prop_assert!(max_diff(g.inverse().forward(a, b, c, d), (x, y, t, psi)) <= 1e-10);
        prop_assert!(max_diff(g.with_epsilon(0.0).forward(x, y, t, psi), (x, y, t, psi)) == 0.0);
    }
}
