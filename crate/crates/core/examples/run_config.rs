//! Drives the CLI runner from code and prints part of the report.

use clap::Parser;
use multitrace::cli::{parse_config, run, Args};

fn main() -> multitrace::Result<()> {
    let args = Args::parse_from(["mtf", "schwarz-equiv", "--gamma", "0.7", "--a", "3"]);
    let cfg = parse_config(&args)?;
    let out = run(&cfg)?;
    println!("run id {}", out.report.run_id);
    println!("{}", serde_json::to_string_pretty(&out.report.results).unwrap());
    Ok(())
}
