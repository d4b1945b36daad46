//! Joint measurability as commutation of spectral measures, and the
//! Born rule for commuting families on the two-qubit singlet.
//!
//! ```bash
//! cargo run --example joint_measurability
//! ```

use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::measure::born_joint;
use qclass::spectral::{OutcomeSubset, COMMUTE_TOL};

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[1.0, -1.0])
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap()
}

fn main() -> qclass::Result<()> {
    let sz = HermitianOperator::new(pauli_z(), 1e-12)?.spectral_measure()?;
    let sx = HermitianOperator::new(pauli_x(), 1e-12)?.spectral_measure()?;
    println!(
        "z vs x commute: {}",
        sz.commutes_with(&sx, COMMUTE_TOL)?
    );

    let i2 = ComplexMatrix::identity(2);
    let z_here = HermitianOperator::new(pauli_z().kron(&i2), 1e-12)?.spectral_measure()?;
    let z_there = HermitianOperator::new(i2.kron(&pauli_z()), 1e-12)?.spectral_measure()?;
    println!(
        "z⊗1 vs 1⊗z commute: {}",
        z_here.commutes_with(&z_there, COMMUTE_TOL)?
    );

    // Singlet state: perfectly anticorrelated along any common axis.
    let inv = 1.0 / 2.0f64.sqrt();
    let psi = [
        Complex64::new(0.0, 0.0),
        Complex64::new(inv, 0.0),
        Complex64::new(-inv, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let singlet = DensityOperator::new(ComplexMatrix::from_pure_state(&psi)?, 1e-9)?;

    // Spectral index 1 is the +1 outcome, index 0 the -1 outcome.
    let plus = OutcomeSubset::new([1]);
    let minus = OutcomeSubset::new([0]);
    println!(
        "P(z=+1, z'=+1) = {:.6}",
        born_joint(&singlet, &[(&z_here, &plus), (&z_there, &plus)])?
    );
    println!(
        "P(z=+1, z'=-1) = {:.6}",
        born_joint(&singlet, &[(&z_here, &plus), (&z_there, &minus)])?
    );

    // Non-commuting pairs are rejected up front.
    match born_joint(
        &singlet,
        &[
            (&z_here, &plus),
            (
                &HermitianOperator::new(pauli_x().kron(&i2), 1e-12)?.spectral_measure()?,
                &plus,
            ),
        ],
    ) {
        Err(e) => println!("z⊗1 with x⊗1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
