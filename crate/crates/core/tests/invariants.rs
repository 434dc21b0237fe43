//! Property checks on the algebra, towers, projectors and charts.

mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use sigmasurf::projector::{member_projector, sum_with};
use sigmasurf::surface::{embed, offdiag_coordinates, rank1_reconstruct};
use sigmasurf::symalg::Monomial;
use sigmasurf::{
    canonical_chart, tower, Complex64, Composition, ConjPoly, ConjRational, Error, HoloVector,
    ProjectorField, RationalVector,
};

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn poly() -> impl Strategy<Value = ConjPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), coeff()), 1..6).prop_map(|terms| {
        ConjPoly::from_terms(
            terms
                .into_iter()
                .map(|((a, b), c)| (Monomial::new(a, b), c)),
        )
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-11 * scale.max(1.0)
}

fn mat_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_operations_commute_with_evaluation(p in poly(), q in poly(), z in point()) {
        let (pz, qz) = (p.eval(z), q.eval(z));
        let s = p.eval_scale(z) * q.eval_scale(z) + p.eval_scale(z) + q.eval_scale(z);
        prop_assert!(close((&p + &q).eval(z), pz + qz, s));
        prop_assert!(close((&p * &q).eval(z), pz * qz, s));
        prop_assert!(close((&p * &q).eval(z), (&q * &p).eval(z), s));
        prop_assert!(close((-&p).eval(z), -pz, s));
    }

    #[test]
    fn multiplication_distributes(p in poly(), q in poly(), r in poly()) {
        let lhs = &p * &(&q + &r);
        let rhs = &(&p * &q) + &(&p * &r);
        prop_assert!(lhs.rel_distance(&rhs) < 1e-14);
    }

    #[test]
    fn conjugation_is_an_involution(p in poly(), z in point()) {
        prop_assert_eq!(p.conj().conj(), p.clone());
        prop_assert!(close(p.conj().eval(z), p.eval(z).conj(), p.eval_scale(z)));
        prop_assert!(p.d().conj().rel_distance(&p.conj().dbar()) < 1e-15);
    }

    #[test]
    fn derivatives_obey_leibniz(p in poly(), q in poly()) {
        let lhs = (&p * &q).d();
        let rhs = &(&p.d() * &q) + &(&p * &q.d());
        prop_assert!(lhs.rel_distance(&rhs) < 1e-14);
        prop_assert!(p.d().dbar().rel_distance(&p.dbar().d()) < 1e-15);
    }

    #[test]
    fn wirtinger_derivatives_match_differences(p in poly(), z in point()) {
        let h = 1e-5;
        let dx = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        let dy = (p.eval(z + Complex64::new(0.0, h)) - p.eval(z - Complex64::new(0.0, h))) / (2.0 * h);
        let i = Complex64::new(0.0, 1.0);
        let scale = 1e3 * p.eval_scale(z).max(1.0);
        prop_assert!(((dx - i * dy) * 0.5 - p.d().eval(z)).norm() < 1e-7 * scale);
        prop_assert!(((dx + i * dy) * 0.5 - p.dbar().eval(z)).norm() < 1e-7 * scale);
    }

    #[test]
    fn rational_quotient_rule(p in poly(), z in point()) {
        let den = &ConjPoly::one_plus_mod_sq() * &ConjPoly::one_plus_mod_sq();
        let r = ConjRational::new(p.clone(), den.clone()).unwrap();
        let h = 1e-5;
        let dx = (r.eval(z + h).unwrap() - r.eval(z - h).unwrap()) / (2.0 * h);
        let dy = (r.eval(z + Complex64::new(0.0, h)).unwrap()
            - r.eval(z - Complex64::new(0.0, h)).unwrap()) / (2.0 * h);
        let fd = (dx - Complex64::new(0.0, 1.0) * dy) * 0.5;
        prop_assert!((r.d().eval(z).unwrap() - fd).norm() < 1e-6 * p.eval_scale(z).max(1.0));
        let back = r.mul(&ConjRational::from_poly(den)).sub(&ConjRational::from_poly(p));
        prop_assert!(back.eval(z).unwrap().norm() < 1e-12 * (1.0 + r.num().max_abs()) * 50.0);
    }

    #[test]
    fn rank1_projector_identities(a in coeff(), b in coeff(), c in coeff(), z in point()) {
        let f = HoloVector::from_coefficients(&[vec![Complex64::new(1.0, 0.0)], vec![a, b], vec![c, a, b]]).unwrap();
        let p = ProjectorField::rank1(&f.to_vector()).unwrap();
        prop_assert!(p.hermiticity_residual() < 1e-12);
        prop_assert!(p.idempotency_residual() < 1e-12);
        prop_assert!(p.trace_residual() < 1e-12);
        let m = p.eval(z).unwrap();
        let row: Vec<Complex64> = m.row(0).iter().copied().collect();
        let rebuilt = rank1_reconstruct(&row).unwrap();
        prop_assert!(mat_gap(&rebuilt, &m) < 1e-9);
    }

    #[test]
    fn tower_is_orthogonal_for_random_input(seed in 0u64..1000) {
        let f = common::generic_input(4, seed);
        let t = tower(&f).unwrap();
        prop_assert!(t.orthogonality_residual() < 1e-12);
        let z = Complex64::new(0.3 + 1e-3 * seed as f64, -0.7);
        let mut total = DMatrix::<Complex64>::zeros(4, 4);
        for k in 0..4 {
            total += member_projector(&t, k).unwrap().eval(z).unwrap();
        }
        prop_assert!(mat_gap(&total, &DMatrix::identity(4, 4)) < 1e-11);
    }

    #[test]
    fn weighted_sum_matches_member_sum(seed in 0u64..200, w in prop::collection::vec(-3.0..3.0f64, 3), z in point()) {
        let t = tower(&common::generic_input(4, seed)).unwrap();
        let p = sum_with(&t, Composition::new(vec![0, 1, 3], w.clone()).unwrap()).unwrap();
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        for (&k, &wk) in [0, 1, 3].iter().zip(&w) {
            expect += member_projector(&t, k).unwrap().eval(z).unwrap() * Complex64::new(wk, 0.0);
        }
        prop_assert!(mat_gap(&p.eval(z).unwrap(), &expect) < 1e-10);
    }

    #[test]
    fn surface_lies_on_the_quadric(seed in 0u64..200, z in point()) {
        let t = tower(&common::generic_input(4, seed)).unwrap();
        let chart = canonical_chart(4, 1).unwrap();
        let pt = embed(&member_projector(&t, 2).unwrap(), &chart, z).unwrap();
        prop_assert!(pt.quadratic_residual(&chart) < 1e-10);
    }

    #[test]
    fn offdiagonal_norm_matches_frobenius(z in point()) {
        let t = tower(&common::generic_input(3, 7)).unwrap();
        let m = member_projector(&t, 1).unwrap().eval(z).unwrap();
        let off: f64 = offdiag_coordinates(&m).iter().map(|x| x * x).sum();
        let diag: f64 = (0..3).map(|i| m[(i, i)].norm_sqr()).sum();
        let frob: f64 = m.iter().map(|x| x.norm_sqr()).sum();
        prop_assert!((off - 2.0 * (frob - diag)).abs() < 1e-12);
        prop_assert!((frob - 1.0).abs() < 1e-12);
    }
}

#[test]
fn unitary_conjugation_preserves_the_tower() {
    let f = common::generic_input(3, 11);
    let t = tower(&f).unwrap();
    let s = 0.5f64.sqrt();
    let u = [[s, s, 0.0], [-s, s, 0.0], [0.0, 0.0, 1.0]];
    let rotated: Vec<ConjPoly> = (0..3)
        .map(|i| {
            (0..3).fold(ConjPoly::zero(), |acc, j| {
                &acc + &f.entries()[j].scale_real(u[i][j])
            })
        })
        .collect();
    let tr = tower(&HoloVector::new(rotated).unwrap()).unwrap();
    let um = DMatrix::from_fn(3, 3, |i, j| Complex64::new(u[i][j], 0.0));
    let z = Complex64::new(0.4, 0.9);
    for k in 0..3 {
        let a = member_projector(&t, k).unwrap().eval(z).unwrap();
        let b = member_projector(&tr, k).unwrap().eval(z).unwrap();
        assert!(mat_gap(&(&um * a * um.adjoint()), &b) < 1e-12);
    }
}

#[test]
fn constant_input_is_degenerate() {
    let f = HoloVector::from_coefficients(&[
        vec![Complex64::new(1.0, 0.0)],
        vec![Complex64::new(2.0, 0.0)],
    ])
    .unwrap();
    assert!(matches!(tower(&f), Err(Error::TowerDegenerate { .. })));
}

#[test]
fn zero_vector_has_no_projector() {
    let v = RationalVector::from_polys(vec![ConjPoly::zero(), ConjPoly::zero()]);
    assert!(ProjectorField::rank1(&v).is_err());
}

#[test]
fn non_holomorphic_rank1_fails_euler_lagrange() {
    let v =
        RationalVector::from_polys(vec![ConjPoly::one(), &ConjPoly::xi() + &ConjPoly::xi_bar()]);
    let p = ProjectorField::rank1(&v).unwrap();
    assert!(sigmasurf::projector::euler_lagrange_residual(&p) > 1e-3);
}

#[test]
fn reports_serialize_with_documented_keys() {
    let t = tower(&sigmasurf::veronese(3).unwrap()).unwrap();
    let p = member_projector(&t, 1).unwrap();
    let report = sigmasurf::projector::reduced_structure_report(&p);
    let v = serde_json::to_value(&report.checks[0]).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["holds", "identity_name", "residual"]);
    let k = sigmasurf::geometry::curvature_report(&p, true).unwrap();
    let v = serde_json::to_value(&k).unwrap();
    for key in ["N", "composition", "A", "K", "constant", "spread"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["A"], 4.0);
}
