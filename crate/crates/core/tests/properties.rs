use gafheat::funcs::{estimate_order_type, taylor_of_expquadpoly, Analytic, ComplexPoly, ExpQuadPoly};
use gafheat::gaf::{apply_ta, covariance_pred, covariance_q_pred, Vtau};
use gafheat::heatflow::{heat_poly, HeatFlow};
use gafheat::metaplectic::{atau_matrix, hyperbolic_phi_psi, to_su11, GroupElement};
use gafheat::zeros::find_roots;
use gafheat::C64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

fn disk(r: f64) -> impl Strategy<Value = C64> {
    (0.0..r, -PI..PI).prop_map(|(m, a)| C64::from_polar(m, a))
}

fn poly(max_deg: usize) -> impl Strategy<Value = ComplexPoly> {
    prop::collection::vec(cplx(2.0), 1..=max_deg + 1).prop_map(ComplexPoly::new)
}

fn expquad() -> impl Strategy<Value = ExpQuadPoly> {
    (disk(0.6), cplx(0.5), cplx(0.3), poly(5)).prop_map(|(a, b, k, p)| ExpQuadPoly::new(a, b, k, p))
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-PI..PI, disk(0.8)).prop_map(|(t, tau)| GroupElement::rotation(t).mul(&atau_matrix(tau).unwrap()))
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heat_semigroup(f in expquad(), t1 in disk(0.3), t2 in disk(0.3), z in disk(1.5)) {
        let a = f.heat(t1).unwrap().heat(t2).unwrap();
        let b = f.heat(t1 + t2).unwrap();
        prop_assert!(close(a.eval(z).unwrap(), b.eval(z).unwrap(), 1e-10));
    }

    #[test]
    fn polynomial_flow_is_invertible(p in poly(8), t in disk(1.0)) {
        let back = heat_poly(&heat_poly(&p, t), -t);
        for (x, y) in back.coeffs().iter().zip(p.coeffs()) {
            prop_assert!(close(*x, *y, 1e-9));
        }
        prop_assert_eq!(heat_poly(&p, C64::new(0.0, 0.0)), p);
    }

    #[test]
    fn shift_then_unshift(p in poly(8), b in cplx(1.0)) {
        let q = p.shift(b).shift(-b);
        for (x, y) in q.coeffs().iter().zip(p.coeffs()) {
            prop_assert!(close(*x, *y, 1e-9));
        }
    }

    #[test]
    fn roots_reconstruct_polynomial(roots in prop::collection::vec(disk(3.0), 1..12)) {
        let p = ComplexPoly::from_roots(&roots);
        let z = find_roots(&p).unwrap();
        prop_assert_eq!(z.total(), roots.len());
        for r in &z.zeros {
            prop_assert!(p.eval(*r).norm() <= 1e-8 * p.abs_sum(*r));
        }
    }

    #[test]
    fn translations_compose_up_to_phase(f in expquad(), a in cplx(1.0), b in cplx(1.0), z in disk(1.0)) {
        let ab = apply_ta(&apply_ta(&f, b), a);
        let direct = apply_ta(&f, a + b);
        let ratio = ab.eval(z).unwrap() / direct.eval(z).unwrap();
        prop_assert!((ratio.norm() - 1.0).abs() < 1e-9);
        let want = C64::new(0.0, (a.conj() * b).im).exp();
        prop_assert!(close(ratio, want, 1e-9));
    }

    #[test]
    fn vtau_scales_zeros(roots in prop::collection::vec(disk(2.0), 1..6), t in disk(0.9)) {
        let f = ExpQuadPoly::from_poly(ComplexPoly::from_roots(&roots));
        let flowed = find_roots(&f.heat(t).unwrap().poly).unwrap();
        let v = f.vtau(t).unwrap();
        let s = (1.0 - t.norm_sqr()).sqrt();
        for z in &flowed.zeros {
            let w = z / s;
            prop_assert!(v.eval(w).unwrap().norm() <= 1e-7 * v.magnitude(w));
        }
    }

    #[test]
    fn su11_round_trip_and_product(g in element(), h in element()) {
        let (p, q) = to_su11(&g.mat).unwrap();
        prop_assert!(close(p, g.p, 1e-12) && close(q, g.q, 1e-12));
        let gh = g.mul(&h);
        let (p2, q2) = to_su11(&gh.mat).unwrap();
        prop_assert!(close(p2, gh.p, 1e-10) && close(q2, gh.q, 1e-10));
        let f = g.factor();
        let back = f.reconstruct().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((back[i][j] - g.mat[i][j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn isometry_preserves_disk(g in element(), t in disk(0.999)) {
        let (phi, psi) = hyperbolic_phi_psi(g.p, g.q, t);
        prop_assert!(phi.norm() < 1.0);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn covariances_are_hermitian(z in disk(1.5), w in disk(1.5), t in disk(0.9), s in disk(0.9)) {
        let a = covariance_pred(z, w, t, s).unwrap();
        let b = covariance_pred(w, z, s, t).unwrap();
        prop_assert!(close(a, b.conj(), 1e-12));
        let a = covariance_q_pred(z, w, t, s).unwrap();
        let b = covariance_q_pred(w, z, s, t).unwrap();
        prop_assert!(close(a, b.conj(), 1e-12));
    }

    #[test]
    fn order_of_gaussian_factor(a in 0.2f64..1.5, phase in -PI..PI) {
        let f = ExpQuadPoly::gaussian(C64::from_polar(a, phase), C64::new(0.0, 0.0));
        let t = taylor_of_expquadpoly(&f, 400).unwrap();
        let (rho, sigma) = estimate_order_type(&t).unwrap();
        prop_assert!((rho - 2.0).abs() < 0.1, "{}", rho);
        prop_assert!((sigma - a / 2.0).abs() < 0.1 * a, "{} {}", sigma, a);
    }
}
