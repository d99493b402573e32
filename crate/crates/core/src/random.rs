//! Seeded generators for randomized scenarios.
//!
//! Used by the regression preset and by the property and acceptance tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eig, ComplexMatrix, C64};
use crate::model::{pure_state, DensityMatrix, Effect, Observable, Povm};

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre vector with standard normal real and imaginary parts.
pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(normal(rng), normal(rng))).collect()
}

pub fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Haar-random orthonormal basis (Gram–Schmidt on a Ginibre matrix).
pub fn orthonormal_basis(rng: &mut impl Rng, n: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = gaussian_vector(rng, n);
        for _ in 0..2 {
            for u in &basis {
                let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Unitary whose columns are [`orthonormal_basis`].
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let basis = orthonormal_basis(rng, n);
    ComplexMatrix::from_fn(n, |r, c| basis[c][r])
}

/// Random Hermitian matrix with eigenvalues uniform in `[lo, hi]`.
pub fn hermitian_with_spectrum(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> ComplexMatrix {
    let u = unitary(rng, n);
    let diag: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    (&(&u * &ComplexMatrix::from_real_diag(&diag)) * &u.adjoint()).hermitian_part()
}

pub fn observable(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Observable {
    Observable::new(hermitian_with_spectrum(rng, n, lo, hi)).expect("Hermitian by construction")
}

pub fn pure_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    pure_state(&gaussian_vector(rng, n)).expect("Gaussian vector is nonzero")
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn mixed_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, n);
    let m = &g * &g.adjoint();
    let trace = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / trace).hermitian_part()).expect("positive by construction")
}

/// Random `k`-outcome POVM `S^{−1/2} G_m S^{−1/2}` with `G_m = M M†` and
/// `S = Σ G_m`. Labels are `"0"`, `"1"`, ….
pub fn povm(rng: &mut impl Rng, n: usize, k: usize) -> Povm {
    assert!(k >= 1);
    let grams: Vec<ComplexMatrix> = (0..k)
        .map(|_| {
            let m = gaussian_matrix(rng, n);
            &m * &m.adjoint()
        })
        .collect();
    let sum = grams.iter().skip(1).fold(grams[0].clone(), |acc, g| &acc + g);
    let inv_sqrt = hermitian_eig(&sum).expect("Gram sum is Hermitian").map(|l| C64::new(l.powf(-0.5), 0.0));
    let mut effects: Vec<Effect> = grams
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let e = (&(&inv_sqrt * g) * &inv_sqrt).hermitian_part();
            Effect::new(i.to_string(), e).expect("valid effect by construction")
        })
        .collect();
    // Absorb the rounding residue into the last effect so completeness is tight.
    let total = effects.iter().fold(ComplexMatrix::zeros(n), |acc, e| &acc + e.matrix());
    let residue = &ComplexMatrix::identity(n) - &total;
    let last = effects.pop().expect("k >= 1");
    effects.push(Effect::new(last.label().to_owned(), (last.matrix() + &residue).hermitian_part()).expect("valid effect"));
    Povm::new(effects).expect("complete by construction")
}

/// Rank-1 projective POVM onto a Haar-random basis.
pub fn projective_povm(rng: &mut impl Rng, n: usize) -> Povm {
    crate::model::projective_povm_from_basis(&orthonormal_basis(rng, n)).expect("orthonormal by construction")
}
