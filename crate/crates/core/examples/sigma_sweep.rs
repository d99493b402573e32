//! σ sweeps of the built-in presets rendered as CSV.
//!
//! `cargo run --example sigma_sweep -- xbasis-theta` prints one preset;
//! without an argument every preset is printed.

use qfeedback::csv::emit_csv;
use qfeedback::scenario::{builtin_scenarios, preset, SigmaSweep};
use qfeedback::{run_sweep, Error, Result};

pub fn run_preset(name: &str) -> Result<String> {
    let mut spec = preset(name).ok_or_else(|| Error::Validation(format!("unknown preset `{name}`")))?;
    spec.sweep = SigmaSweep::linear(0.0, 0.5, 6);
    let report = run_sweep(&spec)?;
    Ok(emit_csv(&report.rows, &report.header))
}

pub fn run() -> Result<()> {
    for spec in builtin_scenarios() {
        print!("{}", run_preset(&spec.name)?);
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    match std::env::args().nth(1) {
        Some(name) => print!("{}", run_preset(&name)?),
        None => run()?,
    }
    Ok(())
}
