mod common;

use common::{circle, projectors, unit_square};
use multitrace::bem2d::{
    assemble_calderon_2d, assemble_coupling, make_three_domain, KernelParams, QuadratureOptions, Side,
    ThreeDomainPreset,
};
use multitrace::numkernel::multiset_distance;
use multitrace::spectra::{jacobi_2d_2dom, jacobi_2d_3dom, spectrum, RelaxationConfig};
use multitrace::C64;

#[test]
fn refinement_tightens_clusters() {
    let cfg = RelaxationConfig::real(&[0.1, 0.1]).unwrap();
    let fractions: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let (p1, p2) = projectors(&circle(n), 1.0, 1.0);
            let pencil = jacobi_2d_2dom(&p1, &p2, &cfg).unwrap();
            spectrum(&pencil, &cfg, 0.05).unwrap().cluster_report.combined()
        })
        .collect();
    for w in fractions.windows(2) {
        assert!(w[1] >= w[0] - 0.02, "{fractions:?}");
    }
}

#[test]
fn heterogeneous_material_keeps_accumulation_points() {
    let cfg = RelaxationConfig::real(&[0.1, 0.1]).unwrap();
    let (p1, p2) = projectors(&circle(64), 1.0, 5.0);
    let s = spectrum(&jacobi_2d_2dom(&p1, &p2, &cfg).unwrap(), &cfg, 0.1).unwrap();
    assert!(s.cluster_report.combined() >= 0.6, "{:?}", s.cluster_report);
    for f in &s.cluster_report.fractions {
        assert!(*f > 0.2);
    }
}

#[test]
fn discrete_spectrum_is_symmetric() {
    let cfg = RelaxationConfig::real(&[-0.4, 1.0]).unwrap();
    let (p1, p2) = projectors(&unit_square(32), 1.0, 2.0);
    let ev = jacobi_2d_2dom(&p1, &p2, &cfg).unwrap().eigenvalues().unwrap();
    let neg: Vec<C64> = ev.iter().map(|z| -z).collect();
    assert!(multiset_distance(&ev, &neg) < 1e-8);
}

#[test]
fn annulus_coupling_and_spectrum() {
    let (g1, g2) = make_three_domain(&ThreeDomainPreset::annulus(32)).unwrap();
    let params = KernelParams::new(1.0).unwrap();
    let q = QuadratureOptions::default();
    let c = assemble_coupling(&g1, &g2, params, q).unwrap();
    let p1 = assemble_calderon_2d(&g1, params, Side::Interior, q).unwrap();
    let p2 = assemble_calderon_2d(&g2, params, Side::Exterior, q).unwrap();
    let r = c.identity_residuals(&p1, &p2).unwrap();
    assert!(r.r21_r12 < 1e-10 && r.r12_r21 < 1e-10 && r.complement < 1e-12, "{r:?}");
    assert!(r.p1_x_r12 < 1e-2, "{r:?}");

    let cfg = RelaxationConfig::real(&[0.25, 0.25, 0.25]).unwrap();
    let s = spectrum(&jacobi_2d_3dom(&p1, &p2, &c, &cfg).unwrap(), &cfg, 0.1).unwrap();
    assert_eq!(s.eigenvalues.len(), 4 * (32 + 32));
    assert!(s.cluster_report.combined() >= 0.7);
}
