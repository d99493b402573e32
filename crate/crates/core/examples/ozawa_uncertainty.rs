//! The residual decoherence after feedback approaches 2σ²ε² with ε² the
//! Ozawa uncertainty; the gap shrinks as σ⁴.

use qfeedback::scenario::qutrit_random;
use qfeedback::{ozawa_uncertainty, probe_output_feedback_reduced, CouplingStrength, EstimateMap, Result};

pub fn run() -> Result<()> {
    let spec = qutrit_random();
    let (rho, a, povm) = (&spec.state, &spec.observable, &spec.povm);
    let est = EstimateMap::uniform(povm, 0.2)?;
    let report = ozawa_uncertainty(rho, a, povm, &est)?;
    println!("epsilon^2 = {:.10} (variance {:.10})", report.epsilon_squared, report.variance);
    for (label, c) in &report.contributions {
        println!("  outcome {label}: {c:.10}");
    }

    let mut previous: Option<f64> = None;
    for s in [0.04, 0.02, 0.01] {
        let sigma = CouplingStrength::new(s)?;
        let residual = probe_output_feedback_reduced(rho, a, povm, &est, sigma)?.decoherence;
        let gap = (residual - report.predicted_residual(sigma)).abs();
        let ratio = previous.map(|p| format!("{:.2}", p / gap)).unwrap_or_default();
        println!("sigma = {s:<5} 1-<X> = {residual:.6e}  2s^2e^2 = {:.6e}  gap = {gap:.3e} {ratio}", report.predicted_residual(sigma));
        previous = Some(gap);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
