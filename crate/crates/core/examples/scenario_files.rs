//! Writes the built-in presets as TOML scenario files and reads them back.
//!
//! `cargo run --example scenario_files -- DIR` writes `DIR/<preset>.toml`;
//! without an argument the documents are printed.

use std::path::Path;

use qfeedback::scenario::builtin_scenarios;
use qfeedback::{parse_scenario, Error, Result};

pub fn run_in(dir: Option<&Path>) -> Result<()> {
    for spec in builtin_scenarios() {
        let text = spec.to_toml();
        let back = parse_scenario(&text)?;
        assert_eq!(back.name, spec.name);
        match dir {
            Some(dir) => {
                let path = dir.join(format!("{}.toml", spec.name));
                std::fs::write(&path, &text).map_err(|e| Error::Io(e.to_string()))?;
                println!("wrote {}", path.display());
            }
            None => println!("{text}"),
        }
    }
    Ok(())
}

pub fn run() -> Result<()> {
    run_in(None)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir = std::env::args().nth(1);
    run_in(dir.as_deref().map(Path::new))
}
