//! Outcome-conditioned feedback evaluated two ways: brute-force joint-space
//! arithmetic and the reduced system-space formula.

use qfeedback::scenario::{eigenbasis, orthogonal_blind};
use qfeedback::{probe_output_feedback_joint, probe_output_feedback_reduced, CouplingStrength, Result};

pub fn run() -> Result<()> {
    for spec in [eigenbasis(), orthogonal_blind()] {
        let est = spec.resolve_estimates()?;
        println!("{} ({} estimates)", spec.name, spec.strategy.name());
        for s in [0.1, 0.5, 1.0] {
            let sigma = CouplingStrength::new(s)?;
            let joint = probe_output_feedback_joint(&spec.state, &spec.observable, &spec.povm, &est, sigma)?;
            let reduced = probe_output_feedback_reduced(&spec.state, &spec.observable, &spec.povm, &est, sigma)?;
            println!(
                "  sigma = {s:<4} <X> joint = {:.12}  reduced = {:.12}  |diff| = {:.1e}",
                joint.x_expectation,
                reduced.x_expectation,
                (joint.x_expectation - reduced.x_expectation).abs()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
