//! Optimal Schwarz on (0, 1) split at γ against block Jacobi on the exact
//! bounded projectors.

use multitrace::bounded::{equivalence_check, BoundedGeometry, SchwarzState};

fn main() -> multitrace::Result<()> {
    let geom = BoundedGeometry::new(0.3, 4.0)?;
    let u0 = SchwarzState::new(1.0, -0.7, 0.4, 2.0);
    for sigma in [0.0, 0.3] {
        let r = equivalence_check(geom, u0, 4, sigma)?;
        println!(
            "sigma = {sigma}: deviations {:?}, Schwarz zero at {:?}, Jacobi zero at {:?}",
            r.deviations, r.schwarz_zero_step, r.jacobi_zero_step
        );
    }
    Ok(())
}
