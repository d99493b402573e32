//! Shot-by-shot Monte-Carlo estimate of the probe coherence compared with the
//! exact value.

use qfeedback::scenario::orthogonal_blind;
use qfeedback::{estimate_probe_x, probe_output_feedback_reduced, CouplingStrength, EstimateMap, Result};

pub fn run() -> Result<()> {
    let spec = orthogonal_blind();
    let (rho, a, povm) = (&spec.state, &spec.observable, &spec.povm);
    let est = EstimateMap::uniform(povm, 0.0)?;
    let sigma = CouplingStrength::new(0.3)?;
    let exact = probe_output_feedback_reduced(rho, a, povm, &est, sigma)?.x_expectation;
    for shots in [1_000, 100_000, 1_000_000] {
        let e = estimate_probe_x(rho, a, povm, &est, sigma, shots, 42)?;
        println!(
            "shots = {shots:>8}  mean = {:.5} +- {:.5}  exact = {exact:.5}  z = {:+.2}",
            e.mean,
            e.stderr,
            (e.mean - exact) / e.stderr.max(f64::MIN_POSITIVE)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
