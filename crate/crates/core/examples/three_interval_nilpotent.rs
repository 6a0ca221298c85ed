//! Three intervals with σ = 0: the Jacobi matrix satisfies J³ ≠ 0, J⁴ = 0.

use multitrace::mtf1d::{block_jacobi_run, jacobi_operator_3dom, JumpData};
use multitrace::C64;

fn main() -> multitrace::Result<()> {
    let zero = C64::new(0.0, 0.0);
    let op = jacobi_operator_3dom(1.5, [zero; 3], JumpData::new(1.0, -0.5, -1.0), JumpData::new(0.25, 2.0, 1.0))?;
    for k in 1..=4 {
        println!("|J^{k}|_max = {:.3e}", op.matrix.pow(k).max_abs());
    }
    let h = block_jacobi_run(&op, &[zero; 8], 6)?;
    println!("errors: {:?}", h.errors);
    Ok(())
}
