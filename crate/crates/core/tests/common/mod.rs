#![allow(dead_code)]

use qfeedback::random;
use qfeedback::{DensityMatrix, EstimateMap, Observable, Povm};
use rand::Rng;

pub struct Scenario {
    pub rho: DensityMatrix,
    pub a: Observable,
    pub povm: Povm,
    pub est: EstimateMap,
}

/// Random scenario: pure or mixed state, observable with spectrum in
/// `[-spread, spread]`, POVM with `outcomes` effects, estimates uniform in
/// `[-est_range, est_range]`.
pub fn scenario(rng: &mut impl Rng, d: usize, outcomes: usize, spread: f64, est_range: f64) -> Scenario {
    let rho = if rng.random_bool(0.5) { random::pure_density(rng, d) } else { random::mixed_density(rng, d) };
    let a = random::observable(rng, d, -spread, spread);
    let povm = random::povm(rng, d, outcomes);
    let est = EstimateMap::from_pairs(
        povm.labels().map(|l| (l.to_owned(), rng.random_range(-est_range..=est_range))).collect::<Vec<_>>(),
    )
    .unwrap();
    Scenario { rho, a, povm, est }
}
