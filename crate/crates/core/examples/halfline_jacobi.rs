//! Block Jacobi on the two half-lines: spectrum and error history.

use multitrace::mtf1d::{block_jacobi_run, jacobi_operator_2dom, theoretical_spectrum, JumpData};
use multitrace::C64;

fn main() -> multitrace::Result<()> {
    let jump = JumpData::at_origin(1.0, 0.5);
    for (s1, s2) in [(0.1, 0.1), (-0.4, 1.0), (0.0, 0.0)] {
        let (s1, s2) = (C64::new(s1, 0.0), C64::new(s2, 0.0));
        let op = jacobi_operator_2dom(2.0, s1, s2, jump)?;
        let mut ev = op.spectrum()?;
        multitrace::numkernel::sort_eigenvalues(&mut ev);
        let h = block_jacobi_run(&op, &[C64::new(0.0, 0.0); 4], 6)?;
        println!("sigma = ({}, {})", s1.re, s2.re);
        println!("  eigenvalues {:.6?}", ev.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
        println!("  expected    {:.6?}", theoretical_spectrum(&[s1, s2]).iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
        println!("  errors      {:?}", h.errors);
    }
    Ok(())
}
