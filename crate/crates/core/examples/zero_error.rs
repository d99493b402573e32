//! Projective measurements of pure states: ε² equals Σ p_m (Im WV_m)², so it
//! vanishes exactly when every weak value is real.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qfeedback::scenario::{orthogonal_blind, xbasis_theta};
use qfeedback::{optimize_estimates, pure_state, zero_error_closed_form, Result, C64};

pub fn run() -> Result<()> {
    let mut cases = vec![xbasis_theta(PI / 8.0), orthogonal_blind()];
    let mut complex = xbasis_theta(0.0);
    complex.name = "complex-amplitudes".into();
    complex.state = pure_state(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, PI / 4.0)])?;
    cases.push(complex);

    for spec in cases {
        let closed = zero_error_closed_form(&spec.state, &spec.observable, &spec.povm)?;
        let (_, report) = optimize_estimates(&spec.state, &spec.observable, &spec.povm)?;
        println!("{:<20} closed form = {closed:.12}  optimal epsilon^2 = {:.12}", spec.name, report.epsilon_squared);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
