//! Eigenvalues of a nonsymmetric matrix and of a mass-matrix pencil.

use multitrace::numkernel::{eig_dense_vectors, eig_generalized, sort_eigenvalues, Matrix};

fn main() -> multitrace::Result<()> {
    // companion matrix of x³ − 1
    let c = Matrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
    let res = eig_dense_vectors(&c)?;
    println!("roots of x^3 - 1 (residual {:.1e}):", res.residual_norm);
    for z in &res.eigenvalues {
        println!("  {:+.12} {:+.12}i", z.re, z.im);
    }

    let b = Matrix::from_real_rows(&[&[4.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]);
    let a = b.matmul(&Matrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]));
    let mut ev = eig_generalized(&a, &b)?.eigenvalues;
    sort_eigenvalues(&mut ev);
    println!("pencil (B D, B): {:?}", ev.iter().map(|z| z.re).collect::<Vec<_>>());
    Ok(())
}
