//! Ozawa measurement uncertainty, small-σ residual models and weak values.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{dominant_column, expectation, variance, DensityMatrix, Observable, Povm, VALIDATION_TOL};
use crate::protocol::{check_scenario, CouplingStrength, EstimateMap, ZERO_PROBABILITY};

/// Weak value of the observable for one outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueEntry {
    pub label: String,
    /// `Tr(E A ρ) / Tr(E ρ)`; zero for degenerate outcomes.
    pub weak_value: C64,
    /// Real part of the weak value, the optimal feedback estimate.
    pub estimate: f64,
    pub imaginary: f64,
    pub probability: f64,
    /// `Tr(Eρ) < 1e-12`: the weak value is 0/0 and the estimate is set to 0.
    pub degenerate: bool,
    /// Estimate lies outside the eigenvalue range of the observable.
    pub anomalous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueReport {
    pub entries: Vec<WeakValueEntry>,
}

impl WeakValueReport {
    pub fn get(&self, label: &str) -> Option<&WeakValueEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn estimates(&self) -> EstimateMap {
        EstimateMap::from_pairs(self.entries.iter().map(|e| (e.label.clone(), e.estimate)))
            .expect("weak-value estimates are finite")
    }

    /// Largest `|Im WV|` over non-degenerate outcomes.
    pub fn max_imaginary(&self) -> f64 {
        self.entries.iter().filter(|e| !e.degenerate).map(|e| e.imaginary.abs()).fold(0.0, f64::max)
    }
}

/// Result of evaluating the Ozawa uncertainty for one estimate map.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub epsilon_squared: f64,
    /// Per-outcome terms `Tr(E(m)(A−A(m))ρ(A−A(m)))`, in POVM order.
    pub contributions: Vec<(String, f64)>,
    /// `ΔA²` of the input state.
    pub variance: f64,
}

impl UncertaintyReport {
    /// `2σ²ε²`.
    pub fn predicted_residual(&self, sigma: CouplingStrength) -> f64 {
        small_sigma_residual(self, sigma)
    }

    pub fn contribution(&self, label: &str) -> Option<f64> {
        self.contributions.iter().find(|(l, _)| l == label).map(|(_, c)| *c)
    }
}

fn shifted(a: &Observable, estimate: f64) -> ComplexMatrix {
    let n = a.dim();
    a.matrix() - &ComplexMatrix::identity(n).scale_real(estimate)
}

/// `ε² = Σ_m Tr(E(m)(A−A(m)) ρ (A−A(m)))` with its per-outcome breakdown.
pub fn ozawa_uncertainty(rho: &DensityMatrix, a: &Observable, povm: &Povm, est: &EstimateMap) -> Result<UncertaintyReport> {
    check_scenario(rho, a, Some(povm))?;
    est.check_labels(povm)?;
    let mut contributions = Vec::with_capacity(povm.len());
    for (effect, estimate) in povm.effects().iter().zip(est.ordered(povm)) {
        let b = shifted(a, estimate);
        let term = effect.matrix().trace_product(&(&(&b * rho.matrix()) * &b));
        let scale = 1.0 + b.frobenius_norm().powi(2);
        debug_assert!(term.im.abs() <= 1e-10 * scale, "contribution has imaginary part {}", term.im);
        debug_assert!(term.re >= -1e-10 * scale, "negative contribution {}", term.re);
        contributions.push((effect.label().to_owned(), term.re));
    }
    let epsilon_squared = contributions.iter().map(|(_, c)| c).sum();
    Ok(UncertaintyReport { epsilon_squared, contributions, variance: variance(a, rho)? })
}

/// Per-outcome weak values `Tr(E A ρ)/Tr(E ρ)`.
pub fn weak_value_estimates(rho: &DensityMatrix, a: &Observable, povm: &Povm) -> Result<WeakValueReport> {
    check_scenario(rho, a, Some(povm))?;
    let (lo, hi) = a.spectral_range();
    let a_rho = a.matrix() * rho.matrix();
    let entries = povm
        .effects()
        .iter()
        .map(|effect| {
            let probability = effect.matrix().trace_product(rho.matrix()).re;
            let label = effect.label().to_owned();
            if probability < ZERO_PROBABILITY {
                return WeakValueEntry {
                    label,
                    weak_value: C64::new(0.0, 0.0),
                    estimate: 0.0,
                    imaginary: 0.0,
                    probability: probability.max(0.0),
                    degenerate: true,
                    anomalous: false,
                };
            }
            let weak_value = effect.matrix().trace_product(&a_rho) / probability;
            let estimate = weak_value.re;
            WeakValueEntry {
                label,
                weak_value,
                estimate,
                imaginary: weak_value.im,
                probability,
                degenerate: false,
                anomalous: estimate < lo - VALIDATION_TOL || estimate > hi + VALIDATION_TOL,
            }
        })
        .collect();
    Ok(WeakValueReport { entries })
}

/// Minimizer of ε² over all estimate maps, with the minimal report.
///
/// Degenerate outcomes get the estimate 0; their ε² term does not depend on it.
pub fn optimize_estimates(rho: &DensityMatrix, a: &Observable, povm: &Povm) -> Result<(EstimateMap, UncertaintyReport)> {
    let estimates = weak_value_estimates(rho, a, povm)?.estimates();
    let report = ozawa_uncertainty(rho, a, povm, &estimates)?;
    Ok((estimates, report))
}

/// `∂ε²/∂A(m) = −2 Re Tr(E(m)Aρ) + 2 A(m) Tr(E(m)ρ)` for each outcome.
pub fn stationarity_gradient(rho: &DensityMatrix, a: &Observable, povm: &Povm, est: &EstimateMap) -> Result<Vec<(String, f64)>> {
    check_scenario(rho, a, Some(povm))?;
    est.check_labels(povm)?;
    let a_rho = a.matrix() * rho.matrix();
    Ok(povm
        .effects()
        .iter()
        .zip(est.ordered(povm))
        .map(|(e, estimate)| {
            let linear = e.matrix().trace_product(&a_rho).re;
            let probability = e.matrix().trace_product(rho.matrix()).re;
            (e.label().to_owned(), -2.0 * linear + 2.0 * estimate * probability)
        })
        .collect())
}

/// Leading-order residual decoherence `2σ²ε²`.
pub fn small_sigma_residual(report: &UncertaintyReport, sigma: CouplingStrength) -> f64 {
    2.0 * sigma.value().powi(2) * report.epsilon_squared
}

/// Leading-order uncompensated decoherence `2σ²ΔA²`, valid only for `⟨A⟩ = 0`.
pub fn variance_residual(rho: &DensityMatrix, a: &Observable, sigma: CouplingStrength) -> Result<f64> {
    let mean = expectation(a, rho)?;
    if mean.abs() > VALIDATION_TOL {
        return Err(Error::NonzeroMean { mean });
    }
    Ok(2.0 * sigma.value().powi(2) * variance(a, rho)?)
}

/// ε² at the weak-value optimum for a pure state and a rank-1 projective
/// measurement: `Σ_m p_m (Im WV_m)²`, plus `|⟨m|A|ψ⟩|²` for every outcome with
/// `⟨m|ψ⟩ = 0`.
pub fn zero_error_closed_form(psi: &DensityMatrix, a: &Observable, povm: &Povm) -> Result<f64> {
    check_scenario(psi, a, Some(povm))?;
    if !povm.is_rank_one_projective() {
        return Err(Error::NotProjective(format!(
            "{} effects on a {}-dimensional space, not all rank-1 projectors",
            povm.len(),
            povm.dim()
        )));
    }
    let psi_vec = psi.pure_vector()?;
    let a_psi = a.matrix().apply(&psi_vec);
    let mut total = 0.0;
    for effect in povm.effects() {
        let m = dominant_column(effect.matrix());
        let overlap: C64 = m.iter().zip(&psi_vec).map(|(x, y)| x.conj() * y).sum();
        let a_overlap: C64 = m.iter().zip(&a_psi).map(|(x, y)| x.conj() * y).sum();
        let p = overlap.norm_sqr();
        if p < ZERO_PROBABILITY {
            total += a_overlap.norm_sqr();
        } else {
            let wv = a_overlap / overlap;
            total += p * wv.im * wv.im;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::model::{projective_povm_from_basis, pure_state};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ket(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn z() -> Observable {
        Observable::new(pauli::z()).unwrap()
    }

    fn plus() -> DensityMatrix {
        pure_state(&ket(&[1.0, 1.0])).unwrap()
    }

    fn theta_state() -> DensityMatrix {
        let t = PI / 8.0;
        pure_state(&ket(&[t.cos(), t.sin()])).unwrap()
    }

    fn x_basis() -> Povm {
        let r = FRAC_1_SQRT_2;
        let basis = [ket(&[r, r]), ket(&[r, -r])];
        crate::model::projective_povm_with_labels(&basis, &["+".into(), "-".into()]).unwrap()
    }

    fn z_basis() -> Povm {
        projective_povm_from_basis(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])]).unwrap()
    }

    fn sigma(s: f64) -> CouplingStrength {
        CouplingStrength::new(s).unwrap()
    }

    #[test]
    fn ozawa_examples() {
        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let est = EstimateMap::uniform(&x_basis(), 1.0).unwrap();
        assert!(ozawa_uncertainty(&zero, &z(), &x_basis(), &est).unwrap().epsilon_squared.abs() < 1e-15);

        let zeros = EstimateMap::uniform(&x_basis(), 0.0).unwrap();
        let report = ozawa_uncertainty(&plus(), &z(), &x_basis(), &zeros).unwrap();
        assert!((report.epsilon_squared - 1.0).abs() < 1e-12);
        assert!(report.contribution("+").unwrap().abs() < 1e-12);
        assert!((report.contribution("-").unwrap() - 1.0).abs() < 1e-12);

        let (est, report) = optimize_estimates(&theta_state(), &z(), &x_basis()).unwrap();
        assert!(report.epsilon_squared.abs() < 1e-12);
        assert!((est.get("+").unwrap() - 0.4142136).abs() < 1e-7);
    }

    #[test]
    fn weak_value_examples() {
        let report = weak_value_estimates(&plus(), &z(), &z_basis()).unwrap();
        assert!((report.entries[0].weak_value - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((report.entries[1].weak_value - C64::new(-1.0, 0.0)).norm() < 1e-12);

        let report = weak_value_estimates(&theta_state(), &z(), &x_basis()).unwrap();
        let t = PI / 8.0;
        let plus_wv = (t.cos() - t.sin()) / (t.cos() + t.sin());
        let minus_wv = (t.cos() + t.sin()) / (t.cos() - t.sin());
        assert!((report.get("+").unwrap().estimate - plus_wv).abs() < 1e-12);
        assert!((report.get("-").unwrap().estimate - minus_wv).abs() < 1e-12);
        assert!((plus_wv - 0.4142136).abs() < 1e-7 && (minus_wv - 2.4142136).abs() < 1e-7);
        assert!(!report.get("+").unwrap().anomalous);
        assert!(report.get("-").unwrap().anomalous);

        let rho = pure_state(&ket(&[0.6, 0.8])).unwrap();
        let a = Observable::new(pauli::x()).unwrap();
        let trivial = Povm::trivial(2, "all");
        let (est, report) = optimize_estimates(&rho, &a, &trivial).unwrap();
        assert!((est.get("all").unwrap() - expectation(&a, &rho).unwrap()).abs() < 1e-12);
        assert!((report.epsilon_squared - variance(&a, &rho).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_outcome_convention() {
        let report = weak_value_estimates(&plus(), &z(), &x_basis()).unwrap();
        let minus = report.get("-").unwrap();
        assert!(minus.degenerate);
        assert_eq!(minus.estimate, 0.0);

        let (est, base) = optimize_estimates(&plus(), &z(), &x_basis()).unwrap();
        for delta in [-3.0, 0.5, 10.0] {
            let moved = est.with("-", delta);
            let e2 = ozawa_uncertainty(&plus(), &z(), &x_basis(), &moved).unwrap().epsilon_squared;
            assert!((e2 - base.epsilon_squared).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_models() {
        let report = UncertaintyReport { epsilon_squared: 1.0, contributions: vec![], variance: 1.0 };
        assert!((small_sigma_residual(&report, sigma(0.1)) - 0.02).abs() < 1e-15);
        let zero = UncertaintyReport { epsilon_squared: 0.0, contributions: vec![], variance: 0.0 };
        assert_eq!(small_sigma_residual(&zero, sigma(3.0)), 0.0);

        let r = variance_residual(&plus(), &z(), sigma(0.1)).unwrap();
        assert!((r - 0.02).abs() < 1e-15);
        assert!((1.0 - (0.2f64).cos() - 0.0199334).abs() < 1e-7);
        let r = variance_residual(&DensityMatrix::maximally_mixed(2), &z(), sigma(0.05)).unwrap();
        assert!((r - 0.005).abs() < 1e-15);

        // Eigenstate of the traceless X with ⟨X⟩ ≠ 0 is rejected; the zero-mean
        // eigenstate of diag(1, 0, −1) gives zero.
        let x = Observable::new(pauli::x()).unwrap();
        assert!(matches!(variance_residual(&plus(), &x, sigma(0.1)), Err(Error::NonzeroMean { .. })));
        let a3 = Observable::new(ComplexMatrix::from_real_diag(&[1.0, 0.0, -1.0])).unwrap();
        let mid = pure_state(&ket(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(variance_residual(&mid, &a3, sigma(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_examples() {
        assert!(zero_error_closed_form(&theta_state(), &z(), &x_basis()).unwrap().abs() < 1e-12);
        assert!((zero_error_closed_form(&plus(), &z(), &x_basis()).unwrap() - 1.0).abs() < 1e-12);

        let r = FRAC_1_SQRT_2;
        let psi = pure_state(&[C64::new(r, 0.0), C64::from_polar(r, PI / 4.0)]).unwrap();
        let closed = zero_error_closed_form(&psi, &z(), &x_basis()).unwrap();
        let (_, report) = optimize_estimates(&psi, &z(), &x_basis()).unwrap();
        assert!(closed > 1e-3);
        assert!((closed - report.epsilon_squared).abs() < 1e-10);
    }

    #[test]
    fn closed_form_preconditions() {
        let trivial = Povm::trivial(2, "all");
        assert!(matches!(zero_error_closed_form(&plus(), &z(), &trivial), Err(Error::NotProjective(_))));
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(matches!(zero_error_closed_form(&mixed, &z(), &x_basis()), Err(Error::NotPure { .. })));
    }

    #[test]
    fn stationarity_at_optimum() {
        let (est, _) = optimize_estimates(&theta_state(), &z(), &x_basis()).unwrap();
        for (_, g) in stationarity_gradient(&theta_state(), &z(), &x_basis(), &est).unwrap() {
            assert!(g.abs() < 1e-12);
        }
    }
}
