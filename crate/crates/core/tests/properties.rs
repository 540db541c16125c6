use clausen::hypergeometric::{
    eval_2f1_euler, eval_2f1_series, eval_f2_euler, eval_f2_series, is_quadric_exact,
    quadric_exact, AppellF2Params, Hyp2F1Params, QuadricParams,
};
use clausen::identities::{symmetry_ab, symmetry_moduli, verify_multivariate_clausen};
use clausen::kummer::ModuliPoint;
use clausen::numerics::{c, rel_diff, QuadratureSpec};
use clausen::pfaffian::moduli_map_t;
use clausen::ratfunc::BigQ;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn series_agrees_with_euler_integral(b in 0.2f64..0.9, dc in 0.2f64..1.0, a in -0.8f64..1.2, r in 0.0f64..0.8, t in 0.0f64..std::f64::consts::TAU) {
        let p = Hyp2F1Params::real(a, b, b + dc).unwrap();
        let z = c(r * t.cos(), r * t.sin());
        let s = eval_2f1_series(&p, z).unwrap();
        let e = eval_2f1_euler(&p, z).unwrap();
        prop_assert!(rel_diff(s, e) < 1e-10, "{s} vs {e}");
    }

    #[test]
    fn f2_euler_matches_series(b1 in 0.3f64..0.8, b2 in 0.3f64..0.8, al in 0.2f64..1.2, z1 in -0.4f64..0.4, z2 in -0.4f64..0.4) {
        let p = AppellF2Params::real(al, b1, b2, b1 + 0.7, b2 + 0.6).unwrap();
        let spec = QuadratureSpec::new(1e-14, 1e-12, 12).unwrap();
        let s = eval_f2_series(&p, c(z1, 0.0), c(z2, 0.0)).unwrap();
        let e = eval_f2_euler(&p, c(z1, 0.0), c(z2, 0.0), &spec).unwrap();
        prop_assert!(rel_diff(s, e) < 1e-8, "{s} vs {e}");
    }

    #[test]
    fn f2_swap_symmetry(b1 in 0.1f64..1.0, b2 in 0.1f64..1.0, al in -1.0f64..1.5, g1 in 0.3f64..2.0, g2 in 0.3f64..2.0,
                        z1 in -0.45f64..0.45, z2 in -0.45f64..0.45) {
        let p = AppellF2Params::real(al, b1, b2, g1, g2).unwrap();
        let a = eval_f2_series(&p, c(z1, 0.1), c(z2, -0.05)).unwrap();
        let b = eval_f2_series(&p.swapped(), c(z2, -0.05), c(z1, 0.1)).unwrap();
        prop_assert!(rel_diff(a, b) < 1e-12);
    }

    #[test]
    fn quadric_family_is_closed(d1 in 2i64..13, d2 in 2i64..13, s1 in 0i64..100, s2 in 0i64..100) {
        // βi = ni/di in (0, 1)
        let (n1, n2) = (1 + s1 % (d1 - 1), 1 + s2 % (d2 - 1));
        let (b1, b2) = (BigQ::new(n1.into(), d1.into()), BigQ::new(n2.into(), d2.into()));
        let p = quadric_exact(&b1, &b2);
        prop_assert!(is_quadric_exact(&p));
        // the swap (β1, γ1) ↔ (β2, γ2) stays in the family
        let s = [p[0].clone(), p[2].clone(), p[1].clone(), p[4].clone(), p[3].clone()];
        prop_assert!(is_quadric_exact(&s));
        let f = QuadricParams::new(n1 as f64 / d1 as f64, n2 as f64 / d2 as f64).unwrap().f2_params().unwrap();
        prop_assert!(f.is_quadric(1e-14) && f.swapped().is_quadric(1e-14));
    }

    #[test]
    fn clausen_identity_random(b1 in 0.1f64..0.7, b2 in 0.1f64..0.7, l1 in 0.02f64..0.25, l2 in 0.8f64..0.95) {
        let m = moduli_map_t(c(l1, 0.0), c(l2, 0.0)).unwrap();
        prop_assume!(m.z1.norm() + m.z2.norm() < 0.95);
        let r = verify_multivariate_clausen(b1, b2, &ModuliPoint::real(l1, l2).unwrap()).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn symmetry_maps_are_involutions(a in 1.1f64..5.0, db in 0.1f64..3.0, l1 in 0.05f64..0.9, l2 in 0.05f64..0.9) {
        let (a, b) = (c(a, 0.0), c(a + db, 0.0));
        let (a1, b1) = symmetry_ab(&a, &b);
        let (a2, b2) = symmetry_ab(&a1, &b1);
        prop_assert!(rel_diff(a2, a) < 1e-12 && rel_diff(b2, b) < 1e-12);
        // the moduli transformation has order four
        let (m1, m2) = (c(l1, 0.0), c(l2, 0.0));
        let mut x = (m1, m2);
        for _ in 0..4 {
            x = symmetry_moduli(&x.0, &x.1);
        }
        prop_assert!(rel_diff(x.0, m1) < 1e-9 && rel_diff(x.1, m2) < 1e-9);
    }
}
