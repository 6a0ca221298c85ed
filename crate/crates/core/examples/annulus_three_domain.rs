//! Three subdomains: a disk, an annulus around it and the exterior.

use multitrace::bem2d::{
    assemble_calderon_2d, assemble_coupling, make_three_domain, KernelParams, QuadratureOptions, Side,
    ThreeDomainPreset,
};
use multitrace::spectra::{jacobi_2d_3dom, spectrum, RelaxationConfig};

fn main() -> multitrace::Result<()> {
    let (g1, g2) = make_three_domain(&ThreeDomainPreset::annulus(48))?;
    let params = KernelParams::new(1.0)?;
    let q = QuadratureOptions::default();
    let coupling = assemble_coupling(&g1, &g2, params, q)?;
    let p1 = assemble_calderon_2d(&g1, params, Side::Interior, q)?;
    let p2 = assemble_calderon_2d(&g2, params, Side::Exterior, q)?;
    println!("{:#?}", coupling.identity_residuals(&p1, &p2)?);

    for s in [[0.25, 0.25, 0.25], [-0.4, 1.0, 0.25]] {
        let cfg = RelaxationConfig::real(&s)?;
        let sp = spectrum(&jacobi_2d_3dom(&p1, &p2, &coupling, &cfg)?, &cfg, 0.1)?;
        println!(
            "sigma = {s:?}: rho {:.4}, fractions {:.3?}, remainder {:.3}",
            sp.spectral_radius, sp.cluster_report.fractions, sp.cluster_report.remainder
        );
    }
    Ok(())
}
