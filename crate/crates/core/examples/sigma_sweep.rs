//! Spectral radius against σ for the analytic two-subdomain operator,
//! written as CSV to stdout.

use multitrace::spectra::{jacobi_1d_2dom, sigma_grid, sigma_sweep, write_sweep_csv};

fn main() -> multitrace::Result<()> {
    let grid = sigma_grid(-0.95, 3.0, 40)?;
    let points = sigma_sweep(&grid, 2, 0.05, |cfg| jacobi_1d_2dom(1.0, cfg))?;
    write_sweep_csv(std::io::stdout().lock(), &points)
}
