//! Jacobi eigendecomposition, spectral exponentials, Kronecker products and
//! the partial trace used to read out the probe.

use qfeedback::linalg::{hermitian_eig, partial_trace_system, pauli, tensor, unitary_exp_i, ComplexMatrix};
use qfeedback::Result;

pub fn run() -> Result<()> {
    let h = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 0.0, -1.0], vec![0.0, -1.0, 1.0]])?;
    let eig = hermitian_eig(&h)?;
    println!("eigenvalues: {:?}", eig.eigenvalues);
    println!("reconstruction error: {:.2e}", eig.reconstruct().max_abs_diff(&h));

    let u = unitary_exp_i(&h, 0.4)?;
    println!("exp(0.4 i H) unitary: {}", u.is_unitary(1e-10));

    // System-major joint index: probe index varies fastest.
    let joint = tensor(&ComplexMatrix::from_real_diag(&[0.25, 0.75]), &pauli::plus_projector());
    let probe = partial_trace_system(&joint, 2)?;
    println!("probe block after tracing out the system:\n{probe:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
