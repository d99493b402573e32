use qfeedback::scenario::{orthogonal_blind, qutrit_random};
use qfeedback::{outcome_probability, probe_output_feedback_reduced, CouplingStrength, EstimateMap, ShotSampler};

#[test]
fn exact_value_inside_three_stderr_in_most_runs() {
    let spec = qutrit_random();
    let est = EstimateMap::uniform(&spec.povm, 0.1).unwrap();
    let sigma = CouplingStrength::new(0.8).unwrap();
    let exact = probe_output_feedback_reduced(&spec.state, &spec.observable, &spec.povm, &est, sigma).unwrap().x_expectation;
    let sampler = ShotSampler::new(&spec.state, &spec.observable, &spec.povm, &est, sigma).unwrap();
    assert!((sampler.exact_x() - exact).abs() < 1e-10);

    let covered = (0..100u64)
        .filter(|&seed| {
            let e = sampler.ensemble(100_000, seed).unwrap();
            (e.mean - exact).abs() <= 3.0 * e.stderr
        })
        .count();
    assert!(covered >= 95, "only {covered}/100 runs covered the exact value");
}

#[test]
fn outcome_frequencies_match_born_rule() {
    let spec = qutrit_random();
    let est = EstimateMap::uniform(&spec.povm, 0.0).unwrap();
    // At σ = 0 the conditional outcome probabilities are exactly Tr(E ρ).
    let sampler = ShotSampler::new(&spec.state, &spec.observable, &spec.povm, &est, CouplingStrength::new(0.0).unwrap()).unwrap();
    let shots = 1_000_000u64;
    let e = sampler.ensemble(shots, 123).unwrap();
    for (effect, (label, count)) in spec.povm.effects().iter().zip(&e.outcome_counts) {
        assert_eq!(effect.label(), label);
        let p = outcome_probability(effect, &spec.state).unwrap();
        let freq = *count as f64 / shots as f64;
        let se = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((freq - p).abs() <= 5.0 * se, "outcome {label}: {freq} vs {p}");
    }
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let spec = orthogonal_blind();
    let est = EstimateMap::uniform(&spec.povm, 0.0).unwrap();
    let sampler = ShotSampler::new(&spec.state, &spec.observable, &spec.povm, &est, CouplingStrength::new(0.3).unwrap()).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| sampler.ensemble(300_001, 9).unwrap())
    };
    assert_eq!(run(1), run(4));
}
