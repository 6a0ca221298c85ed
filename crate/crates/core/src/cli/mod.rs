//! Front end of the `mtf` binary: configuration, the run driver and the
//! artifacts it writes.

pub mod config;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{parse_config, Args, Geometry, Mode, RunConfig, SweepModel};
pub use output::Artifact;
pub use run::{run, run_id, write_outputs, RunOutput, RunReport, Timing};

/// Parses `args`, runs, and writes artifacts or prints the report.
/// Returns the process exit code: 0 success, 2 config error, 3 numerical
/// failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&parsed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: &Args) -> crate::Result<()> {
    let cfg = parse_config(args)?;
    let out = run(&cfg)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    match &cfg.out {
        Some(dir) => {
            let files = write_outputs(dir, &out)?;
            writeln!(w, "run {} ({}) wrote {} files to {}", out.report.run_id, out.report.mode, files.len(), dir.display())?;
        }
        None => {
            let text = serde_json::to_string_pretty(&out.report)
                .map_err(|e| crate::Error::Io(std::io::Error::other(e)))?;
            writeln!(w, "{text}")?;
        }
    }
    Ok(())
}
