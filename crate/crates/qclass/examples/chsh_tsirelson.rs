//! CHSH at the quantum maximum from quasi-measure correlators: the
//! singlet with measurement axes at the standard angles reaches
//! S = 2√2, the pair marginals are honest joint probabilities, and the
//! four-observable signed measure carries the negativity.
//!
//! ```bash
//! cargo run --example chsh_tsirelson
//! ```

use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::measure::{quasi_measure, sym_moment, NEGATIVITY_REPORT_TOL};
use qclass::product::{sym_product_measure, ObservableId};
use qclass::spectral::SpectralMeasure;

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

/// Spin observable along angle θ in the x–z plane.
fn spin_at(theta: f64) -> ComplexMatrix {
    let z = pauli_z().scale(theta.cos());
    let x = pauli_x().scale(theta.sin());
    &z + &x
}

fn main() -> qclass::Result<()> {
    use std::f64::consts::PI;

    let i2 = ComplexMatrix::identity(2);
    // Axes chosen so the pinned convention S = E11 + E12 + E21 - E22
    // reaches +2√2 on the singlet.
    let a_angles = [0.0, PI / 2.0];
    let b_angles = [5.0 * PI / 4.0, 3.0 * PI / 4.0];

    let mut observables: Vec<SpectralMeasure> = Vec::new();
    for theta in a_angles {
        let m = spin_at(theta).kron(&i2);
        observables.push(HermitianOperator::new(m, 1e-12)?.spectral_measure()?);
    }
    for theta in b_angles {
        let m = i2.kron(&spin_at(theta));
        observables.push(HermitianOperator::new(m, 1e-12)?.spectral_measure()?);
    }
    let labeled: Vec<(ObservableId, &SpectralMeasure)> = observables
        .iter()
        .enumerate()
        .map(|(i, s)| (ObservableId::of(i), s))
        .collect();

    let inv = 1.0 / 2.0f64.sqrt();
    let psi = [
        Complex64::new(0.0, 0.0),
        Complex64::new(inv, 0.0),
        Complex64::new(-inv, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let singlet = DensityOperator::new(ComplexMatrix::from_pure_state(&psi)?, 1e-9)?;

    let mut e = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            e[i][j] = sym_moment(&singlet, &[labeled[i], labeled[2 + j]])?;
            println!("E(A{} B{}) = {:+.9}", i + 1, j + 1, e[i][j]);
        }
    }
    let s = e[0][0] + e[0][1] + e[1][0] - e[1][1];
    println!("\nS  = {s:+.12}");
    println!("2√2 = {:+.12}", 2.0 * 2.0f64.sqrt());

    // The joint signed measure over all four observables is not a
    // probability measure, although every correlator above is local.
    let joint = sym_product_measure(&labeled)?;
    let mu = quasi_measure(&singlet, &joint)?;
    let report = mu.negativity_report(NEGATIVITY_REPORT_TOL);
    println!(
        "\njoint measure: {} atoms, {} negative, minimum weight {:+.6}",
        mu.space().atom_count(),
        report.negative_atoms.len(),
        report.min_weight
    );
    Ok(())
}
