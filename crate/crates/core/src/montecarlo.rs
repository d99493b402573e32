//! Shot-by-shot virtual experiment.
//!
//! Each shot draws a measurement outcome from the Born probabilities, applies
//! the feedback for that outcome to the conditional probe state, and then
//! reads the probe out in the X basis. Per shot the generator is consumed in a
//! fixed order: one uniform draw for the outcome, then one for the probe.
//!
//! Ensembles are split into fixed-size chunks. Chunk `c` runs on
//! `ChaCha8Rng::seed_from_u64(seed)` with stream `c`, so the result depends
//! only on `(scenario, shots, seed)` and not on how many threads execute it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::pauli;
use crate::model::{DensityMatrix, Observable, Povm};
use crate::protocol::{feedback_unitary, probe_branches, CouplingStrength, EstimateMap, ZERO_PROBABILITY};

/// Shots per independently seeded chunk.
pub const CHUNK_SHOTS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ShotResult {
    pub outcome: String,
    pub applied_estimate: f64,
    /// Probe X readout, `+1` or `−1`.
    pub probe_x: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate {
    pub shots: u64,
    pub mean: f64,
    /// Sample standard deviation over `√shots`; zero for a single shot.
    pub stderr: f64,
    pub seed: u64,
    /// Number of times each outcome was drawn, in POVM order.
    pub outcome_counts: Vec<(String, u64)>,
}

/// Per-outcome probabilities and post-feedback probe coherence, precomputed
/// once per scenario.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    labels: Vec<String>,
    estimates: Vec<f64>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
    x_after_feedback: Vec<f64>,
}

impl ShotSampler {
    pub fn new(rho: &DensityMatrix, a: &Observable, povm: &Povm, est: &EstimateMap, sigma: CouplingStrength) -> Result<Self> {
        est.check_labels(povm)?;
        let estimates = est.ordered(povm);
        let branches = probe_branches(rho, a, povm, sigma)?;
        let x = pauli::x();
        let mut probabilities = Vec::with_capacity(branches.len());
        let mut x_after_feedback = Vec::with_capacity(branches.len());
        for ((p, block), &estimate) in branches.iter().zip(&estimates) {
            if *p <= ZERO_PROBABILITY {
                probabilities.push(0.0);
                x_after_feedback.push(1.0);
                continue;
            }
            let u = feedback_unitary(estimate, sigma);
            let corrected = &(&u * block) * &u.adjoint();
            probabilities.push(*p);
            x_after_feedback.push((x.trace_product(&corrected).re / p).clamp(-1.0, 1.0));
        }
        let total: f64 = probabilities.iter().sum();
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        Ok(Self {
            labels: povm.labels().map(str::to_owned).collect(),
            estimates,
            probabilities,
            cumulative,
            x_after_feedback,
        })
    }

    /// Born probability of each outcome, in POVM order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `Σ_m p(m) ⟨X⟩_m`, the value the ensemble mean converges to.
    pub fn exact_x(&self) -> f64 {
        self.probabilities.iter().zip(&self.x_after_feedback).map(|(p, x)| p * x).sum()
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, i8) {
        let u: f64 = rng.random();
        let last = self.cumulative.len() - 1;
        let mut m = self.cumulative.iter().position(|&c| u < c).unwrap_or(last);
        // Never land on a zero-probability outcome through rounding at the top end.
        while self.probabilities[m] == 0.0 && m > 0 {
            m -= 1;
        }
        let v: f64 = rng.random();
        let x = if v < 0.5 * (1.0 + self.x_after_feedback[m]) { 1 } else { -1 };
        (m, x)
    }

    pub fn shot<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotResult {
        let (m, probe_x) = self.draw(rng);
        ShotResult { outcome: self.labels[m].clone(), applied_estimate: self.estimates[m], probe_x }
    }

    /// Runs `shots` shots from `seed`.
    pub fn ensemble(&self, shots: u64, seed: u64) -> Result<EnsembleEstimate> {
        if shots == 0 {
            return Err(Error::InvalidParameter("shots must be at least 1".into()));
        }
        let chunks = shots.div_ceil(CHUNK_SHOTS);
        let partials: Vec<(u64, Vec<u64>)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let n = CHUNK_SHOTS.min(shots - c * CHUNK_SHOTS);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let mut plus = 0u64;
                let mut counts = vec![0u64; self.labels.len()];
                for _ in 0..n {
                    let (m, x) = self.draw(&mut rng);
                    counts[m] += 1;
                    if x > 0 {
                        plus += 1;
                    }
                }
                (plus, counts)
            })
            .collect();

        let mut plus = 0u64;
        let mut counts = vec![0u64; self.labels.len()];
        for (p, c) in partials {
            plus += p;
            for (total, k) in counts.iter_mut().zip(c) {
                *total += k;
            }
        }
        let n = shots as f64;
        let mean = (2.0 * plus as f64 - n) / n;
        let stderr = if shots == 1 {
            0.0
        } else {
            // x² = 1 for every shot, so Σ(x − mean)² = n(1 − mean²).
            let var = (n * (1.0 - mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        Ok(EnsembleEstimate {
            shots,
            mean,
            stderr,
            seed,
            outcome_counts: self.labels.iter().cloned().zip(counts).collect(),
        })
    }
}

/// One shot of the virtual experiment.
pub fn simulate_shot<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    a: &Observable,
    povm: &Povm,
    est: &EstimateMap,
    sigma: CouplingStrength,
    rng: &mut R,
) -> Result<ShotResult> {
    Ok(ShotSampler::new(rho, a, povm, est, sigma)?.shot(rng))
}

/// Ensemble mean of the probe X readout over `shots` shots.
pub fn estimate_probe_x(
    rho: &DensityMatrix,
    a: &Observable,
    povm: &Povm,
    est: &EstimateMap,
    sigma: CouplingStrength,
    shots: u64,
    seed: u64,
) -> Result<EnsembleEstimate> {
    ShotSampler::new(rho, a, povm, est, sigma)?.ensemble(shots, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::model::{projective_povm_from_basis, pure_state};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn scenario() -> (DensityMatrix, Observable, Povm) {
        let rho = pure_state(&ket(&[1.0, 1.0])).unwrap();
        let a = Observable::new(pauli::z()).unwrap();
        let r = FRAC_1_SQRT_2;
        let povm = projective_povm_from_basis(&[ket(&[r, r]), ket(&[r, -r])]).unwrap();
        (rho, a, povm)
    }

    #[test]
    fn zero_coupling_always_gives_plus_one() {
        let (rho, a, povm) = scenario();
        let est = EstimateMap::uniform(&povm, 0.7).unwrap();
        let sampler = ShotSampler::new(&rho, &a, &povm, &est, CouplingStrength::new(0.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!((0..1000).all(|_| sampler.shot(&mut rng).probe_x == 1));
    }

    #[test]
    fn perfect_compensation_gives_plus_one() {
        let rho = pure_state(&ket(&[1.0, 1.0])).unwrap();
        let a = Observable::new(pauli::z()).unwrap();
        let povm = projective_povm_from_basis(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])]).unwrap();
        let est = EstimateMap::from_pairs([("0", 1.0), ("1", -1.0)]).unwrap();
        let sigma = CouplingStrength::new(0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert_eq!(simulate_shot(&rho, &a, &povm, &est, sigma, &mut rng).unwrap().probe_x, 1);
        }
        let e = estimate_probe_x(&rho, &a, &povm, &est, sigma, 10_000, 5).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let (rho, a, povm) = scenario();
        let est = EstimateMap::uniform(&povm, 0.0).unwrap();
        let sampler = ShotSampler::new(&rho, &a, &povm, &est, CouplingStrength::new(0.3).unwrap()).unwrap();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (0..64).map(|_| sampler.shot(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
        assert_eq!(sampler.ensemble(200_000, 42).unwrap(), sampler.ensemble(200_000, 42).unwrap());
    }

    #[test]
    fn single_shot_has_zero_stderr() {
        let (rho, a, povm) = scenario();
        let est = EstimateMap::uniform(&povm, 0.0).unwrap();
        let e = estimate_probe_x(&rho, &a, &povm, &est, CouplingStrength::new(1.2).unwrap(), 1, 3).unwrap();
        assert!(e.mean == 1.0 || e.mean == -1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn zero_shots_rejected() {
        let (rho, a, povm) = scenario();
        let est = EstimateMap::uniform(&povm, 0.0).unwrap();
        assert!(estimate_probe_x(&rho, &a, &povm, &est, CouplingStrength::new(0.1).unwrap(), 0, 3).is_err());
    }

    #[test]
    fn never_samples_zero_probability_outcome() {
        let (rho, a, povm) = scenario();
        let est = EstimateMap::uniform(&povm, 0.0).unwrap();
        let e = estimate_probe_x(&rho, &a, &povm, &est, CouplingStrength::new(0.0).unwrap(), 100_000, 8).unwrap();
        assert_eq!(e.outcome_counts[1].1, 0);
    }
}
