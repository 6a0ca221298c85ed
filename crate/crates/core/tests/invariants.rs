mod common;

use common::z;
use multitrace::bounded::{calderon_bounded, calderon_from_dtn, dtn_operators, jacobi_operator_bounded, BoundedGeometry};
use multitrace::mtf1d::{exact_traces_2dom, jacobi_operator_2dom, stack_traces, theoretical_spectrum, JumpData};
use multitrace::numkernel::multiset_distance;
use multitrace::spectra::{
    cluster_report, jacobi_1d_2dom, jacobi_1d_3dom, jacobi_1d_bounded, RelaxationConfig,
};
use multitrace::C64;
use proptest::prelude::*;

fn sigma() -> impl Strategy<Value = f64> {
    (-0.9f64..3.0).prop_filter("away from the nilpotent limit", |s| s.abs() > 1e-3)
}

fn symmetry_defect(eigs: &[C64]) -> f64 {
    let neg: Vec<C64> = eigs.iter().map(|z| -z).collect();
    multiset_distance(eigs, &neg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pencil_matches_sqrt_law(s1 in sigma(), s2 in sigma(), a in 0.1f64..20.0) {
        let cfg = RelaxationConfig::real(&[s1, s2]).unwrap();
        let ev = jacobi_1d_2dom(a, &cfg).unwrap().eigenvalues().unwrap();
        prop_assert!(multiset_distance(&ev, &theoretical_spectrum(&cfg.sigmas)) < 1e-10);
    }

    #[test]
    fn spectra_are_symmetric(s in prop::array::uniform3(sigma()), a in 0.2f64..10.0, gamma in 0.05f64..0.95) {
        let cfg2 = RelaxationConfig::real(&s[..2]).unwrap();
        let cfg3 = RelaxationConfig::real(&s).unwrap();
        let geom = BoundedGeometry::new(gamma, a).unwrap();
        for ev in [
            jacobi_1d_2dom(a, &cfg2).unwrap().eigenvalues().unwrap(),
            jacobi_1d_3dom(a, &cfg3).unwrap().eigenvalues().unwrap(),
            jacobi_1d_bounded(geom, &cfg2).unwrap().eigenvalues().unwrap(),
        ] {
            prop_assert!(symmetry_defect(&ev) < 1e-9, "{:?}", ev);
        }
    }

    #[test]
    fn spectrum_does_not_depend_on_a(s1 in sigma(), s2 in sigma(), a in 0.05f64..50.0) {
        let j = |a| jacobi_operator_2dom(a, z(s1), z(s2), JumpData::at_origin(0.0, 0.0)).unwrap().spectrum().unwrap();
        prop_assert!(multiset_distance(&j(a), &j(1.0)) < 1e-10);
    }

    #[test]
    fn bounded_projectors_and_dtn(a in 0.05f64..15.0, gamma in 0.02f64..0.98) {
        let g = BoundedGeometry::new(gamma, a).unwrap();
        let (p1, p2) = calderon_bounded(g);
        prop_assert!(p1.projector_defect() < 1e-12 && p2.projector_defect() < 1e-12);
        let d = dtn_operators(g);
        prop_assert!((d.dtn1 * d.ntd1 - 1.0).abs() < 1e-14);
        prop_assert!((d.dtn2 * d.ntd2 - 1.0).abs() < 1e-14);
        let (q1, q2) = calderon_from_dtn(d, a);
        let scale = p1.matrix.max_abs().max(1.0);
        prop_assert!((&p1.matrix - &q1.matrix).max_abs() < 1e-12 * scale);
        prop_assert!((&p2.matrix - &q2.matrix).max_abs() < 1e-12 * scale);
    }

    /// The pencil `(A, B)` built from the projectors and the closed-form
    /// Jacobi matrices describe the same operator.
    #[test]
    fn pencil_operator_equals_closed_form(s1 in sigma(), s2 in sigma(), a in 0.2f64..10.0, gamma in 0.05f64..0.95) {
        let cfg = RelaxationConfig::real(&[s1, s2]).unwrap();
        let jump = JumpData::at_origin(0.0, 0.0);
        let explicit = jacobi_operator_2dom(a, z(s1), z(s2), jump).unwrap().matrix;
        let from_pencil = jacobi_1d_2dom(a, &cfg).unwrap().operator().unwrap();
        prop_assert!((&explicit - &from_pencil).max_abs() < 1e-11 * explicit.max_abs().max(1.0));

        let geom = BoundedGeometry::new(gamma, a).unwrap();
        let explicit = jacobi_operator_bounded(geom, z(s1), z(s2), JumpData::new(0.0, 0.0, gamma)).unwrap().matrix;
        let from_pencil = jacobi_1d_bounded(geom, &cfg).unwrap().operator().unwrap();
        prop_assert!((&explicit - &from_pencil).max_abs() < 1e-11 * explicit.max_abs().max(1.0));
    }

    #[test]
    fn jacobi_fixed_point_is_the_exact_solution(
        s1 in sigma(), s2 in sigma(), a in 0.2f64..10.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0,
    ) {
        let jump = JumpData::at_origin(alpha, beta);
        let op = jacobi_operator_2dom(a, z(s1), z(s2), jump).unwrap();
        let (t1, t2) = exact_traces_2dom(a, jump).unwrap();
        let exact = stack_traces(&[t1, t2]);
        let fp = op.fixed_point().unwrap();
        let err = fp.iter().zip(&exact).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10 * (1.0 + alpha.abs() + beta.abs()) * (a + 1.0 / a));
    }

    #[test]
    fn cluster_fractions_never_exceed_one(
        eigs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..60),
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
        eps in 0.0f64..1.0,
    ) {
        let eigs: Vec<C64> = eigs.into_iter().map(|(r, i)| C64::new(r, i)).collect();
        let pts: Vec<C64> = pts.into_iter().map(|(r, i)| C64::new(r, i)).collect();
        let rep = cluster_report(&eigs, &pts, eps).unwrap();
        prop_assert!(rep.fractions.iter().all(|&f| (0.0..=1.0).contains(&f)));
        prop_assert!(rep.combined() <= 1.0 + 1e-12);
        prop_assert!((rep.combined() + rep.remainder - 1.0).abs() < 1e-12);
    }
}

#[test]
fn zero_epsilon_catches_nothing_off_the_points() {
    let eigs = [C64::new(0.30, 0.0), C64::new(-0.31, 0.0)];
    let rep = cluster_report(&eigs, &[C64::new(0.301511, 0.0), C64::new(-0.301511, 0.0)], 0.0).unwrap();
    assert_eq!(rep.combined(), 0.0);
    assert_eq!(rep.remainder, 1.0);
}
