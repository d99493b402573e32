//! Weak values as the decoherence-minimizing feedback estimates, including an
//! anomalous one outside the eigenvalue range.

use std::f64::consts::PI;

use qfeedback::scenario::xbasis_theta;
use qfeedback::{optimize_estimates, ozawa_uncertainty, weak_value_estimates, Result};

pub fn run() -> Result<()> {
    let spec = xbasis_theta(PI / 8.0);
    let (rho, a, povm) = (&spec.state, &spec.observable, &spec.povm);
    let report = weak_value_estimates(rho, a, povm)?;
    for e in &report.entries {
        println!(
            "outcome {}: p = {:.6}  weak value = {:.7} {:+.2e}i  anomalous = {}",
            e.label, e.probability, e.weak_value.re, e.weak_value.im, e.anomalous
        );
    }
    let (best, minimal) = optimize_estimates(rho, a, povm)?;
    println!("minimal epsilon^2 = {:.3e}", minimal.epsilon_squared);
    for delta in [0.1, -0.3] {
        let moved = best.with("-", best.get("-").unwrap_or(0.0) + delta);
        let e2 = ozawa_uncertainty(rho, a, povm, &moved)?.epsilon_squared;
        println!("shift estimate of '-' by {delta:+}: epsilon^2 = {e2:.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
