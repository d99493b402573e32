//! Probe-qubit coherence with and without outcome-conditioned feedback.
//!
//! The probe starts in `|X=+1⟩`, couples to the system through
//! `exp(−iσ A⊗Z)`, and after the system measurement reports outcome `m` the
//! probe receives the correction `exp(+iσ A(m) Z)`. The figure of merit is the
//! probe's final `⟨X⟩`.
//!
//! Three evaluation routes are provided: the eigenbasis sum for the
//! uncompensated case, brute-force joint-space arithmetic, and the reduced
//! system-space trace formula. The last two must agree to 1e-10.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace_system, pauli, tensor, unitary_exp_i, ComplexMatrix, C64};
use crate::model::{DensityMatrix, Effect, Observable, Povm};

/// Outcome probabilities at or below this are treated as zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Integrated coupling σ (ℏ = 1). Any finite value, either sign.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CouplingStrength(f64);

impl CouplingStrength {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling strength must be finite, got {sigma}")));
        }
        Ok(Self(sigma))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Feedback value `A(m)` for each outcome label.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateMap {
    entries: BTreeMap<String, f64>,
}

impl EstimateMap {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self> {
        if let Some((label, value)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("estimate for `{label}` is not finite ({value})")));
        }
        Ok(Self { entries })
    }

    pub fn from_pairs<L: Into<String>>(pairs: impl IntoIterator<Item = (L, f64)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(l, v)| (l.into(), v)).collect())
    }

    /// The same value for every outcome of `povm`.
    pub fn uniform(povm: &Povm, value: f64) -> Result<Self> {
        Self::from_pairs(povm.labels().map(|l| (l.to_owned(), value)))
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.get(label).copied()
    }

    pub fn entries(&self) -> &BTreeMap<String, f64> {
        &self.entries
    }

    /// Returns a copy with `label`'s estimate replaced.
    pub fn with(&self, label: &str, value: f64) -> Self {
        let mut entries = self.entries.clone();
        entries.insert(label.to_owned(), value);
        Self { entries }
    }

    /// Checks that the labels are exactly those of `povm`.
    pub fn check_labels(&self, povm: &Povm) -> Result<()> {
        for label in povm.labels() {
            if !self.entries.contains_key(label) {
                return Err(Error::LabelMismatch(format!("no estimate for outcome `{label}`")));
            }
        }
        if self.entries.len() != povm.len() {
            let extra = self
                .entries
                .keys()
                .find(|k| !povm.labels().any(|l| l == k.as_str()))
                .cloned()
                .unwrap_or_default();
            return Err(Error::LabelMismatch(format!("estimate for unknown outcome `{extra}`")));
        }
        Ok(())
    }

    /// Estimates in POVM order. Callers must have run [`Self::check_labels`].
    pub(crate) fn ordered(&self, povm: &Povm) -> Vec<f64> {
        povm.labels().map(|l| self.entries[l]).collect()
    }
}

/// Final probe coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOutput {
    pub x_expectation: f64,
    pub decoherence: f64,
}

impl ProbeOutput {
    pub fn new(x_expectation: f64) -> Self {
        debug_assert!(x_expectation.abs() <= 1.0 + 1e-9, "<X> out of range: {x_expectation}");
        Self { x_expectation, decoherence: 1.0 - x_expectation }
    }
}

pub(crate) fn check_scenario(rho: &DensityMatrix, a: &Observable, povm: Option<&Povm>) -> Result<()> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: a.dim() });
    }
    if let Some(p) = povm {
        if p.dim() != rho.dim() {
            return Err(Error::DimensionMismatch { expected: rho.dim(), found: p.dim() });
        }
    }
    Ok(())
}

/// `exp(−iσ A⊗Z)` on the joint space.
pub fn interaction_unitary(a: &Observable, sigma: CouplingStrength) -> Result<ComplexMatrix> {
    unitary_exp_i(&tensor(a.matrix(), &pauli::z()), -sigma.value())
}

/// `exp(+iσ A(m) Z)` on the probe.
pub fn feedback_unitary(estimate: f64, sigma: CouplingStrength) -> ComplexMatrix {
    let phase = sigma.value() * estimate;
    ComplexMatrix::from_diag(&[C64::from_polar(1.0, phase), C64::from_polar(1.0, -phase)])
}

/// Uncompensated output: `Σ_a ⟨a|ρ|a⟩ cos(2σ A_a)` over the eigenbasis of `A`.
pub fn probe_output_no_feedback(rho: &DensityMatrix, a: &Observable, sigma: CouplingStrength) -> Result<ProbeOutput> {
    check_scenario(rho, a, None)?;
    let eig = hermitian_eig(a.matrix())?;
    let x = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let v = eig.eigenvector(k);
            let weight = rho.matrix().apply(&v).iter().zip(&v).map(|(rv, vi)| vi.conj() * rv).sum::<C64>().re;
            weight * (2.0 * sigma.value() * lambda).cos()
        })
        .sum();
    Ok(ProbeOutput::new(x))
}

/// Joint state `U_SP (ρ ⊗ |+⟩⟨+|) U_SP†`.
fn evolved_joint_state(rho: &DensityMatrix, a: &Observable, sigma: CouplingStrength) -> Result<ComplexMatrix> {
    let u = interaction_unitary(a, sigma)?;
    let initial = tensor(rho.matrix(), &pauli::plus_projector());
    Ok(&(&u * &initial) * &u.adjoint())
}

/// Feedback output by explicit joint-space arithmetic:
/// `Σ_m Tr((E(m)⊗X) U_Z(m) U_SP (ρ⊗ρ_P) U_SP† U_Z(m)†)`.
pub fn probe_output_feedback_joint(
    rho: &DensityMatrix,
    a: &Observable,
    povm: &Povm,
    est: &EstimateMap,
    sigma: CouplingStrength,
) -> Result<ProbeOutput> {
    check_scenario(rho, a, Some(povm))?;
    est.check_labels(povm)?;
    let d = rho.dim();
    let evolved = evolved_joint_state(rho, a, sigma)?;
    let id_s = ComplexMatrix::identity(d);
    let x = pauli::x();
    let mut total = C64::new(0.0, 0.0);
    for (effect, estimate) in povm.effects().iter().zip(est.ordered(povm)) {
        let u_z = tensor(&id_s, &feedback_unitary(estimate, sigma));
        let state = &(&u_z * &evolved) * &u_z.adjoint();
        total += tensor(effect.matrix(), &x).trace_product(&state);
    }
    Ok(ProbeOutput::new(total.re))
}

/// Feedback output from the reduced system-space expression
/// `Re Σ_m Tr(E(m) e^{iσ(A−A(m))} ρ e^{iσ(A−A(m))})`.
pub fn probe_output_feedback_reduced(
    rho: &DensityMatrix,
    a: &Observable,
    povm: &Povm,
    est: &EstimateMap,
    sigma: CouplingStrength,
) -> Result<ProbeOutput> {
    check_scenario(rho, a, Some(povm))?;
    est.check_labels(povm)?;
    let s = sigma.value();
    let base = unitary_exp_i(a.matrix(), s)?;
    let sandwich = &(&base * rho.matrix()) * &base;
    let mut total = 0.0;
    for (effect, estimate) in povm.effects().iter().zip(est.ordered(povm)) {
        // e^{iσ(A−a)} = e^{−iσa} e^{iσA}, applied on both sides.
        let phase = C64::from_polar(1.0, -2.0 * s * estimate);
        total += (effect.matrix().trace_product(&sandwich) * phase).re;
    }
    Ok(ProbeOutput::new(total))
}

/// Probe branch for one outcome: probability and unnormalized 2×2 probe block
/// `Tr_S((E⊗I) U_SP(ρ⊗ρ_P)U_SP†)`.
pub(crate) fn probe_branch(evolved: &ComplexMatrix, effect: &Effect, d: usize) -> Result<(f64, ComplexMatrix)> {
    let conditioned = &tensor(effect.matrix(), &ComplexMatrix::identity(2)) * evolved;
    let block = partial_trace_system(&conditioned, d)?;
    Ok((block.trace().re, block))
}

/// Unnormalized probe blocks for every outcome, in POVM order.
pub(crate) fn probe_branches(
    rho: &DensityMatrix,
    a: &Observable,
    povm: &Povm,
    sigma: CouplingStrength,
) -> Result<Vec<(f64, ComplexMatrix)>> {
    check_scenario(rho, a, Some(povm))?;
    let evolved = evolved_joint_state(rho, a, sigma)?;
    povm.effects().iter().map(|e| probe_branch(&evolved, e, rho.dim())).collect()
}

/// Outcome probability and normalized probe state after the interaction,
/// conditioned on outcome `e` (before any feedback).
pub fn conditional_probe_state(
    rho: &DensityMatrix,
    a: &Observable,
    e: &Effect,
    sigma: CouplingStrength,
) -> Result<(f64, DensityMatrix)> {
    check_scenario(rho, a, None)?;
    if e.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: e.dim() });
    }
    let evolved = evolved_joint_state(rho, a, sigma)?;
    let (probability, block) = probe_branch(&evolved, e, rho.dim())?;
    if probability <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability { probability });
    }
    let state = DensityMatrix::new(block.scale_real(1.0 / probability))?;
    Ok((probability, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{projective_povm_from_basis, pure_state};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ket(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn sigma(s: f64) -> CouplingStrength {
        CouplingStrength::new(s).unwrap()
    }

    fn z() -> Observable {
        Observable::new(pauli::z()).unwrap()
    }

    fn plus() -> DensityMatrix {
        pure_state(&ket(&[1.0, 1.0])).unwrap()
    }

    fn z_basis() -> Povm {
        projective_povm_from_basis(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])]).unwrap()
    }

    fn x_basis() -> Povm {
        let r = FRAC_1_SQRT_2;
        projective_povm_from_basis(&[ket(&[r, r]), ket(&[r, -r])]).unwrap()
    }

    const COS_06: f64 = 0.8253356149096783;

    #[test]
    fn interaction_unitary_examples() {
        let u0 = interaction_unitary(&z(), sigma(0.0)).unwrap();
        assert!(u0.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let u = interaction_unitary(&z(), sigma(0.3)).unwrap();
        let e = |p: f64| C64::from_polar(1.0, p);
        let expected = ComplexMatrix::from_diag(&[e(-0.3), e(0.3), e(0.3), e(-0.3)]);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn interaction_commutes_with_probe_z() {
        let a = Observable::new(pauli::x()).unwrap();
        let u = interaction_unitary(&a, sigma(0.7)).unwrap();
        let iz = tensor(&ComplexMatrix::identity(2), &pauli::z());
        assert!((&u * &iz).max_abs_diff(&(&iz * &u)) < 1e-10);
        assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn no_feedback_examples() {
        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let x = probe_output_no_feedback(&zero, &z(), sigma(0.3)).unwrap().x_expectation;
        assert!((x - COS_06).abs() < 1e-7);
        let x = probe_output_no_feedback(&plus(), &z(), sigma(0.3)).unwrap().x_expectation;
        assert!((x - COS_06).abs() < 1e-7);
        let x = probe_output_no_feedback(&plus(), &z(), sigma(0.0)).unwrap().x_expectation;
        assert!((x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn feedback_unitary_examples() {
        assert_eq!(feedback_unitary(0.0, sigma(0.3)), ComplexMatrix::identity(2));
        let u = feedback_unitary(1.0, sigma(0.3));
        let expected = ComplexMatrix::from_diag(&[C64::from_polar(1.0, 0.3), C64::from_polar(1.0, -0.3)]);
        assert!(u.max_abs_diff(&expected) < 1e-15);

        // Probe block of exp(−iσ λ Z) undone by the matching feedback.
        let lambda = -1.7;
        let block = unitary_exp_i(&pauli::z(), -0.3 * lambda).unwrap();
        let product = &feedback_unitary(lambda, sigma(0.3)) * &block;
        assert!(product.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn feedback_examples_joint_and_reduced() {
        let perfect = EstimateMap::from_pairs([("0", 1.0), ("1", -1.0)]).unwrap();
        for s in [0.1, 0.5, 1.0, 2.3] {
            let j = probe_output_feedback_joint(&plus(), &z(), &z_basis(), &perfect, sigma(s)).unwrap();
            let r = probe_output_feedback_reduced(&plus(), &z(), &z_basis(), &perfect, sigma(s)).unwrap();
            assert!((j.x_expectation - 1.0).abs() < 1e-10);
            assert!((r.x_expectation - 1.0).abs() < 1e-10);
        }

        let trivial = Povm::trivial(2, "all");
        let zeros = EstimateMap::uniform(&trivial, 0.0).unwrap();
        let rho = pure_state(&ket(&[0.6, 0.8])).unwrap();
        let a = Observable::new(pauli::x()).unwrap();
        let nf = probe_output_no_feedback(&rho, &a, sigma(0.4)).unwrap().x_expectation;
        let j = probe_output_feedback_joint(&rho, &a, &trivial, &zeros, sigma(0.4)).unwrap().x_expectation;
        let r = probe_output_feedback_reduced(&rho, &a, &trivial, &zeros, sigma(0.4)).unwrap().x_expectation;
        assert!((nf - j).abs() < 1e-10);
        assert!((nf - r).abs() < 1e-10);

        let zeros = EstimateMap::uniform(&x_basis(), 0.0).unwrap();
        let j = probe_output_feedback_joint(&plus(), &z(), &x_basis(), &zeros, sigma(0.3)).unwrap().x_expectation;
        let r = probe_output_feedback_reduced(&plus(), &z(), &x_basis(), &zeros, sigma(0.3)).unwrap().x_expectation;
        assert!((j - COS_06).abs() < 1e-7);
        assert!((r - j).abs() < 1e-10);
    }

    #[test]
    fn reduced_at_zero_sigma_is_one() {
        let rho = pure_state(&ket(&[0.6, 0.8])).unwrap();
        let est = EstimateMap::from_pairs([("0", 3.0), ("1", -2.0)]).unwrap();
        let x = probe_output_feedback_reduced(&rho, &z(), &x_basis(), &est, sigma(0.0)).unwrap().x_expectation;
        assert!((x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weak_value_feedback_residual_is_fourth_order() {
        let theta = PI / 8.0;
        let rho = pure_state(&ket(&[theta.cos(), theta.sin()])).unwrap();
        let est = EstimateMap::from_pairs([("0", 0.414_213_562_373_095), ("1", 2.414213562373095)]).unwrap();
        let out = probe_output_feedback_reduced(&rho, &z(), &x_basis(), &est, sigma(0.01)).unwrap();
        assert!(out.decoherence <= 1e-6);
        assert!(out.decoherence >= -1e-12);
    }

    #[test]
    fn label_and_dimension_errors() {
        let est = EstimateMap::from_pairs([("0", 1.0)]).unwrap();
        assert!(matches!(
            probe_output_feedback_reduced(&plus(), &z(), &z_basis(), &est, sigma(0.1)),
            Err(Error::LabelMismatch(_))
        ));
        let est = EstimateMap::from_pairs([("0", 1.0), ("1", 1.0), ("2", 0.0)]).unwrap();
        assert!(matches!(
            probe_output_feedback_joint(&plus(), &z(), &z_basis(), &est, sigma(0.1)),
            Err(Error::LabelMismatch(_))
        ));
        let a3 = Observable::new(ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(
            probe_output_no_feedback(&plus(), &a3, sigma(0.1)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(CouplingStrength::new(f64::NAN).is_err());
        assert!(EstimateMap::from_pairs([("0", f64::INFINITY)]).is_err());
    }

    #[test]
    fn conditional_probe_state_examples() {
        let id = Effect::new("all", ComplexMatrix::identity(2)).unwrap();
        let (p, state) = conditional_probe_state(&plus(), &z(), &id, sigma(0.0)).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!(state.matrix().max_abs_diff(&pauli::plus_projector()) < 1e-15);

        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let (_, state) = conditional_probe_state(&zero, &z(), &id, sigma(0.3)).unwrap();
        let x = pauli::x().trace_product(state.matrix()).re;
        assert!((x - COS_06).abs() < 1e-7);

        let xb = x_basis();
        let minus = &xb.effects()[1];
        for s in [1e-3, 1e-2, 0.05] {
            let (p, _) = conditional_probe_state(&plus(), &z(), minus, sigma(s)).unwrap();
            assert!((p - s.sin().powi(2)).abs() < 1e-12);
        }

        assert!(matches!(
            conditional_probe_state(&plus(), &z(), minus, sigma(0.0)),
            Err(Error::ZeroProbability { .. })
        ));
    }
}
