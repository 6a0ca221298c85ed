//! Galerkin Calderón projectors of the unit circle: projector and
//! complement residuals under refinement, and the mesh text format.

use multitrace::bem2d::{assemble_operators, make_circle, DiscreteCalderon, KernelParams, QuadratureOptions, Side};

fn main() -> multitrace::Result<()> {
    for n in [32, 64, 128] {
        let mesh = make_circle(n, 1.0, [0.0, 0.0])?;
        let ops = assemble_operators(&mesh, KernelParams::new(1.0)?, QuadratureOptions::default())?;
        let (v_sym, w_sym) = ops.symmetry_defects();
        let p1 = DiscreteCalderon::from_operators(&ops, Side::Interior);
        let p2 = DiscreteCalderon::from_operators(&ops, Side::Exterior);
        println!(
            "n = {n:4}: V/W asymmetry {v_sym:.1e}/{w_sym:.1e}, Q^2 - Q {:.3e}, X P2 X + P1 - Id {:.1e}",
            p1.projector_residual()?,
            p1.complement_residual(&p2)?
        );
    }
    print!("{}", make_circle(4, 1.0, [0.0, 0.0])?.to_text());
    Ok(())
}
