//! Uncompensated probe decoherence and its small-σ variance model.

use qfeedback::{probe_output_no_feedback, pure_state, variance_residual, CouplingStrength, Observable, Result, C64};
use qfeedback::linalg::pauli;

pub fn run() -> Result<()> {
    let rho = pure_state(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)])?;
    let z = Observable::new(pauli::z())?;
    println!("{:>6} {:>14} {:>14}", "sigma", "1-<X> exact", "2 sigma^2 dA^2");
    for s in [0.01, 0.05, 0.1, 0.2, 0.3] {
        let sigma = CouplingStrength::new(s)?;
        let exact = probe_output_no_feedback(&rho, &z, sigma)?.decoherence;
        let model = variance_residual(&rho, &z, sigma)?;
        println!("{s:>6} {exact:>14.8} {model:>14.8}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
