//! Validated states, observables and POVMs.
//!
//! Every constructor checks its invariants once, at the 1e-9 level, and the
//! values are treated as exact afterwards.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};

/// Validation tolerance applied by every constructor in this module.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Positive semidefinite, unit-trace system state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:.3e})")));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = hermitian_eig(&matrix)?.eigenvalues[0];
        if min < -VALIDATION_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// The state vector of a pure state, with an arbitrary global phase.
    pub fn pure_vector(&self) -> Result<Vec<C64>> {
        let purity = self.purity();
        if (purity - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotPure { purity });
        }
        Ok(dominant_column(&self.matrix))
    }
}

/// Normalized vector spanning a rank-1 projector, read off its largest column.
pub(crate) fn dominant_column(m: &ComplexMatrix) -> Vec<C64> {
    let n = m.dim();
    let k = (0..n).max_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re)).unwrap_or(0);
    let norm = m[(k, k)].re.max(0.0).sqrt();
    (0..n).map(|r| m[(r, k)] / norm).collect()
}

/// Hermitian target observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Smallest and largest eigenvalue.
    pub fn spectral_range(&self) -> (f64, f64) {
        let e = hermitian_eig(&self.matrix).expect("observable is Hermitian by construction");
        (e.eigenvalues[0], *e.eigenvalues.last().unwrap())
    }
}

/// One labeled POVM element.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    label: String,
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let label = label.into();
        let deviation = matrix.hermitian_deviation();
        if deviation > VALIDATION_TOL {
            return Err(Error::InvalidEffect {
                label,
                reason: format!("not Hermitian (deviation {deviation:.3e})"),
            });
        }
        let eig = hermitian_eig(&matrix)?;
        let (lo, hi) = (eig.eigenvalues[0], *eig.eigenvalues.last().unwrap());
        if lo < -VALIDATION_TOL || hi > 1.0 + VALIDATION_TOL {
            return Err(Error::InvalidEffect {
                label,
                reason: format!("eigenvalues [{lo:.3e}, {hi:.3e}] outside [0, 1]"),
            });
        }
        Ok(Self { label, matrix: matrix.hermitian_part() })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Whether the effect is a rank-1 projector within tolerance.
    pub fn is_rank_one_projector(&self) -> bool {
        let m = &self.matrix;
        (m * m).max_abs_diff(m) <= VALIDATION_TOL && (m.trace().re - 1.0).abs() <= VALIDATION_TOL
    }
}

/// Complete measurement: labeled effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidParameter("a POVM needs at least one effect".into()))?;
        let dim = first.dim();
        let mut seen = HashSet::new();
        let mut sum = ComplexMatrix::zeros(dim);
        for e in &effects {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
            }
            if !seen.insert(e.label()) {
                return Err(Error::DuplicateLabel(e.label().to_owned()));
            }
            sum = &sum + e.matrix();
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > VALIDATION_TOL {
            return Err(Error::Incomplete { deviation });
        }
        Ok(Self { effects })
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(dim: usize, label: impl Into<String>) -> Self {
        Self { effects: vec![Effect { label: label.into(), matrix: ComplexMatrix::identity(dim) }] }
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.effects.iter().map(Effect::label)
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn is_rank_one_projective(&self) -> bool {
        self.effects.len() == self.dim() && self.effects.iter().all(Effect::is_rank_one_projector)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Re Tr(Aρ)`.
pub fn expectation(a: &Observable, rho: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), a.dim())?;
    let value = a.matrix().trace_product(rho.matrix());
    debug_assert!(value.im.abs() <= 1e-10, "Tr(A rho) has imaginary part {}", value.im);
    Ok(value.re)
}

/// `Tr(A²ρ) − Tr(Aρ)²`, clamped at zero.
pub fn variance(a: &Observable, rho: &DensityMatrix) -> Result<f64> {
    let mean = expectation(a, rho)?;
    let a2 = a.matrix() * a.matrix();
    let second = a2.trace_product(rho.matrix()).re;
    Ok((second - mean * mean).max(0.0))
}

/// Born probability `Tr(Eρ)`, clamped to `[0, 1]`.
pub fn outcome_probability(e: &Effect, rho: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), e.dim())?;
    Ok(e.matrix().trace_product(rho.matrix()).re.clamp(0.0, 1.0))
}

/// Normalizes `vector` and returns `|ψ⟩⟨ψ|`.
pub fn pure_state(vector: &[C64]) -> Result<DensityMatrix> {
    let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if vector.is_empty() || norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let psi: Vec<C64> = vector.iter().map(|z| z / norm).collect();
    Ok(DensityMatrix { matrix: ComplexMatrix::projector(&psi).hermitian_part() })
}

/// Rank-1 projective POVM `{|m⟩⟨m|}` with labels `"0"`, `"1"`, ….
pub fn projective_povm_from_basis(basis: &[Vec<C64>]) -> Result<Povm> {
    let labels: Vec<String> = (0..basis.len()).map(|i| i.to_string()).collect();
    projective_povm_with_labels(basis, &labels)
}

/// As [`projective_povm_from_basis`] with explicit labels.
pub fn projective_povm_with_labels(basis: &[Vec<C64>], labels: &[String]) -> Result<Povm> {
    let Some(first) = basis.first() else {
        return Err(Error::Incomplete { deviation: 1.0 });
    };
    let dim = first.len();
    if labels.len() != basis.len() {
        return Err(Error::LabelMismatch(format!(
            "{} labels for {} basis vectors",
            labels.len(),
            basis.len()
        )));
    }
    let mut deviation: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        check_dims(dim, u.len())?;
        for (j, v) in basis.iter().enumerate() {
            let inner: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((inner - expected).norm());
        }
    }
    if deviation > VALIDATION_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    if basis.len() != dim {
        return Err(Error::Incomplete { deviation: (dim - basis.len().min(dim)) as f64 });
    }
    let effects = basis
        .iter()
        .zip(labels)
        .map(|(v, l)| Effect::new(l.clone(), ComplexMatrix::projector(v)))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(effects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn z() -> Observable {
        Observable::new(pauli::z()).unwrap()
    }

    fn theta_state(theta: f64) -> DensityMatrix {
        pure_state(&ket(&[theta.cos(), theta.sin()])).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let plus = pure_state(&ket(&[1.0, 1.0])).unwrap();
        assert_eq!(expectation(&z(), &zero).unwrap(), 1.0);
        assert!(expectation(&z(), &plus).unwrap().abs() < 1e-15);
        let e = expectation(&z(), &theta_state(PI / 8.0)).unwrap();
        assert!((e - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn variance_examples() {
        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let plus = pure_state(&ket(&[1.0, 1.0])).unwrap();
        assert_eq!(variance(&z(), &zero).unwrap(), 0.0);
        assert!((variance(&z(), &plus).unwrap() - 1.0).abs() < 1e-15);
        assert!((variance(&z(), &DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn probability_examples() {
        let zero = pure_state(&ket(&[1.0, 0.0])).unwrap();
        let e0 = Effect::new("0", ComplexMatrix::projector(&ket(&[1.0, 0.0]))).unwrap();
        assert_eq!(outcome_probability(&e0, &zero).unwrap(), 1.0);

        let plus = pure_state(&ket(&[1.0, 1.0])).unwrap();
        let minus = Effect::new("-", ComplexMatrix::projector(&ket(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]))).unwrap();
        assert!(outcome_probability(&minus, &plus).unwrap() < 1e-15);

        let p = outcome_probability(&e0, &theta_state(PI / 8.0)).unwrap();
        assert!((p - 0.8535534).abs() < 1e-7);
    }

    #[test]
    fn pure_state_normalizes() {
        let rho = pure_state(&ket(&[2.0, 0.0])).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        let plus = pure_state(&ket(&[1.0, 1.0])).unwrap();
        assert!((plus.matrix()[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!(matches!(pure_state(&ket(&[0.0, 0.0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn projective_povms() {
        let zb = projective_povm_from_basis(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])]).unwrap();
        assert_eq!(zb.effects()[0].matrix(), &ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        assert!(zb.is_rank_one_projective());

        let r = FRAC_1_SQRT_2;
        let xb = projective_povm_from_basis(&[ket(&[r, r]), ket(&[r, -r])]).unwrap();
        let sum = xb.effects()[0].matrix() + xb.effects()[1].matrix();
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);

        assert!(matches!(
            projective_povm_from_basis(&[ket(&[1.0, 0.0]), ket(&[1.0, 1.0])]),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(matches!(
            projective_povm_from_basis(&[ket(&[1.0, 0.0, 0.0]), ket(&[0.0, 1.0, 0.0])]),
            Err(Error::Incomplete { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let neg = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidState(_))));
        let trace2 = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(trace2), Err(Error::InvalidState(_))));

        let non_herm = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(Observable::new(non_herm), Err(Error::NotHermitian { .. })));

        let big = ComplexMatrix::from_real_diag(&[1.2, 0.0]);
        assert!(matches!(Effect::new("a", big), Err(Error::InvalidEffect { .. })));

        let e0 = Effect::new("a", ComplexMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let e1 = Effect::new("b", ComplexMatrix::from_real_diag(&[0.0, 0.9])).unwrap();
        assert!(matches!(Povm::new(vec![e0.clone(), e1]), Err(Error::Incomplete { .. })));

        let e1 = Effect::new("a", ComplexMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert!(matches!(Povm::new(vec![e0, e1]), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn pure_vector_round_trip() {
        let rho = theta_state(0.3);
        let v = rho.pure_vector().unwrap();
        assert!(pure_state(&v).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
        assert!(matches!(
            DensityMatrix::maximally_mixed(2).pure_vector(),
            Err(Error::NotPure { .. })
        ));
    }
}
