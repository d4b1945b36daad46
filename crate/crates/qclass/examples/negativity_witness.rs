//! The signed joint measure of the three Pauli observables for the state
//! with Bloch vector (1,1,1)/√3: every single-observable marginal is a
//! probability distribution, yet one joint atom carries weight (1-√3)/8.
//!
//! ```bash
//! cargo run --example negativity_witness
//! ```

use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::measure::{quasi_measure, NEGATIVITY_REPORT_TOL};
use qclass::product::{sym_product_measure, ObservableId};

fn main() -> qclass::Result<()> {
    let paulis = [
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])?,
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])?,
        ComplexMatrix::diagonal(&[1.0, -1.0]),
    ];
    let spectra = paulis
        .iter()
        .map(|m| HermitianOperator::new(m.clone(), 1e-12)?.spectral_measure())
        .collect::<qclass::Result<Vec<_>>>()?;
    let observables: Vec<_> = spectra
        .iter()
        .enumerate()
        .map(|(i, s)| (ObservableId::of(i), s))
        .collect();
    let joint = sym_product_measure(&observables)?;

    let r = 1.0 / 3.0f64.sqrt();
    let rho = DensityOperator::from_bloch([r, r, r], 1e-9)?;
    let mu = quasi_measure(&rho, &joint)?;

    println!(" x   y   z   weight");
    for atom in mu.space().atoms() {
        let signs = mu.space().outcome_values(&atom);
        println!(
            "{:+.0}  {:+.0}  {:+.0}   {:+.9}",
            signs[0],
            signs[1],
            signs[2],
            mu.weight_at(&atom)?
        );
    }

    let report = mu.negativity_report(NEGATIVITY_REPORT_TOL);
    println!("\ntotal mass:       {:+.12}", mu.total());
    println!("minimum weight:   {:+.12}", report.min_weight);
    println!("analytic witness: {:+.12}", (1.0 - 3.0f64.sqrt()) / 8.0);
    println!("negative atoms:   {}", report.negative_atoms.len());
    println!("total variation:  {:+.12}", report.total_variation);
    println!("classical:        {}", report.is_classical);
    Ok(())
}
