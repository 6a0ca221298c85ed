use std::io::Write;

use crate::spectra::{write_eigenvalues_csv, write_sweep_csv, SweepPoint};
use crate::{Result, C64};

/// A file produced by a run, kept in memory until written.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("writers emit ASCII")
}

impl Artifact {
    pub fn text(name: &str, contents: &str) -> Self {
        Self {
            name: name.to_string(),
            contents: contents.to_string(),
        }
    }

    pub fn csv_eigenvalues(name: &str, eigs: &[C64]) -> Result<Self> {
        let mut buf = Vec::new();
        write_eigenvalues_csv(&mut buf, eigs)?;
        Ok(Self::text(name, &utf8(buf)))
    }

    pub fn csv_sweep(name: &str, points: &[SweepPoint]) -> Result<Self> {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, points)?;
        Ok(Self::text(name, &utf8(buf)))
    }

    pub fn csv_history(name: &str, errors: &[f64]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = errors.iter().enumerate().map(|(k, &e)| vec![k as f64, e]).collect();
        Self::csv_columns(name, &["iteration", "error"], &rows)
    }

    pub fn csv_columns(name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<Self> {
        let mut buf = Vec::new();
        writeln!(buf, "{}", header.join(","))?;
        for r in rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:.12e}")).collect();
            writeln!(buf, "{}", cells.join(","))?;
        }
        Ok(Self::text(name, &utf8(buf)))
    }
}

pub const SPECTRUM_GP: &str = "\
set datafile separator ','
set xlabel 'Re'
set ylabel 'Im'
set size ratio -1
set grid
plot 'eigenvalues.csv' skip 1 using 1:2 with points pt 7 ps 0.5 title 'eigenvalues', \\
     'theory.csv' skip 1 using 1:2 with points pt 2 ps 2 lw 2 title 'accumulation points'
pause -1
";

pub const HISTORY_GP: &str = "\
set datafile separator ','
set xlabel 'iteration'
set ylabel 'error'
set logscale y
set grid
plot 'history.csv' skip 1 using 1:($2 > 0 ? $2 : 1e-17) with linespoints title 'block Jacobi'
pause -1
";

pub const SWEEP_GP: &str = "\
set datafile separator ','
set xlabel 'sigma'
set ylabel 'spectral radius'
set yrange [0:2]
set samples 1000
set grid
plot 'sweep.csv' skip 1 using 1:2 with linespoints pt 7 ps 0.4 title 'computed', \\
     sqrt(abs(x/(1+x))) with lines dt 2 title 'sqrt|sigma/(1+sigma)|'
pause -1
";
