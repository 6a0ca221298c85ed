use multitrace::bem2d::bessel::{bessel_k0, bessel_k1};
use multitrace::bem2d::kernel_2d;

fn main() -> multitrace::Result<()> {
    println!("{:>10} {:>24} {:>24} {:>24}", "x", "K0", "K1", "K0/(2 pi)");
    for x in [1e-8, 1e-3, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0] {
        println!("{x:>10} {:>24.16e} {:>24.16e} {:>24.16e}", bessel_k0(x), bessel_k1(x), kernel_2d(1.0, x)?);
    }
    Ok(())
}
