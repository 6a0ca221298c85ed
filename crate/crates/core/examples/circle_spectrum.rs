//! Jacobi spectrum of the discretized two-subdomain problem on the circle.

use multitrace::bem2d::{assemble_operators, make_circle, DiscreteCalderon, KernelParams, QuadratureOptions, Side};
use multitrace::spectra::{jacobi_2d_2dom, spectrum, RelaxationConfig};

fn main() -> multitrace::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let mesh = make_circle(n, 1.0, [0.0, 0.0])?;
    let ops = assemble_operators(&mesh, KernelParams::new(1.0)?, QuadratureOptions::default())?;
    let p1 = DiscreteCalderon::from_operators(&ops, Side::Interior);
    let p2 = DiscreteCalderon::from_operators(&ops, Side::Exterior);
    for s in [[0.1, 0.1], [-0.4, 1.0]] {
        let cfg = RelaxationConfig::real(&s)?;
        let sp = spectrum(&jacobi_2d_2dom(&p1, &p2, &cfg)?, &cfg, 0.05)?;
        println!("sigma = {s:?}: rho = {:.5}", sp.spectral_radius);
        for (z, f) in sp.theoretical_points.iter().zip(&sp.cluster_report.fractions) {
            println!("  {:+.5}{:+.5}i  {:.3}", z.re, z.im, f);
        }
        println!("  remainder {:.3}", sp.cluster_report.remainder);
    }
    Ok(())
}
