//! Validate a Hermitian matrix, diagonalize it, and cluster the spectrum
//! into a projection-valued measure.
//!
//! ```bash
//! cargo run --example spectral_decomposition
//! ```

use qclass::hermitian::HermitianOperator;
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::spectral::BorelFunction;

fn print_matrix(label: &str, m: &ComplexMatrix) {
    println!("{label}:");
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m.get(i, j);
                format!("{:+.3}{:+.3}i", z.re, z.im)
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() -> qclass::Result<()> {
    // A 3×3 observable with a degenerate eigenvalue pair.
    let raw = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.0, 0.0),
        ],
        vec![
            Complex64::new(0.0, 0.5),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.5, 0.0),
        ],
    ])?;
    let observable = HermitianOperator::new(raw, 1e-12)?;

    let decomposition = observable.eig()?;
    println!("eigenvalues (ascending): {:?}", decomposition.eigenvalues);
    println!(
        "reconstruction residual: {:.3e}",
        decomposition.reconstruct().max_diff(observable.matrix())
    );

    let measure = observable.spectral_measure()?;
    println!("\nspectral points after clustering: {}", measure.len());
    for k in 0..measure.len() {
        println!(
            "\nλ = {:+.6}  (projector rank {:.0})",
            measure.value(k),
            measure.projector(k).trace().re
        );
        print_matrix("projector", measure.projector(k));
    }

    // Functional calculus: the measure of φ(X) reuses the projectors.
    let squared = measure.apply_function(&BorelFunction::total(|x| x * x))?;
    println!("\nspectrum of X²: {:?}", squared.values());
    Ok(())
}
