//! Two structural properties of the signed measures: convex mixtures of
//! states map to convex mixtures of measures, and applying a function to
//! one observable pushes the measure forward along that coordinate.
//!
//! ```bash
//! cargo run --example mixtures_and_pushforward
//! ```

use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::measure::{mix, quasi_measure, MixtureWeights};
use qclass::product::{sym_product_measure, ObservableId};
use qclass::spectral::BorelFunction;

fn main() -> qclass::Result<()> {
    let sz = HermitianOperator::new(ComplexMatrix::diagonal(&[1.0, -1.0]), 1e-12)?
        .spectral_measure()?;
    let sx = HermitianOperator::new(
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])?,
        1e-12,
    )?
    .spectral_measure()?;
    let joint = sym_product_measure(&[(ObservableId::of(0), &sz), (ObservableId::of(1), &sx)])?;

    // Mixing |0⟩⟨0| and |1⟩⟨1| equally gives the maximally mixed state.
    let up = DensityOperator::new(ComplexMatrix::diagonal(&[1.0, 0.0]), 1e-9)?;
    let down = DensityOperator::new(ComplexMatrix::diagonal(&[0.0, 1.0]), 1e-9)?;
    let mu_up = quasi_measure(&up, &joint)?;
    let mu_down = quasi_measure(&down, &joint)?;
    let mixed = mix(
        &[&mu_up, &mu_down],
        &MixtureWeights::new(vec![0.5, 0.5])?,
    )?;
    let direct = quasi_measure(&DensityOperator::maximally_mixed(2), &joint)?;

    println!("(z, x)      ½μ_up+½μ_down   μ_mixed");
    for atom in mixed.space().atoms() {
        let outcome = mixed.space().outcome_values(&atom);
        println!(
            "({:+.0}, {:+.0})      {:+.6}        {:+.6}",
            outcome[0],
            outcome[1],
            mixed.weight_at(&atom)?,
            direct.weight_at(&atom)?
        );
    }

    // Pushing z through λ ↦ λ² collapses the two z outcomes into one.
    let pushed = mu_up.pushforward(ObservableId::of(0), &BorelFunction::total(|x| x * x))?;
    println!("\nafter pushing z through λ²:");
    println!("z-spectrum: {:?}", pushed.space().spectrum(0));
    for atom in pushed.space().atoms() {
        let outcome = pushed.space().outcome_values(&atom);
        println!(
            "(z²={:.0}, x={:+.0})  weight {:+.6}",
            outcome[0],
            outcome[1],
            pushed.weight_at(&atom)?
        );
    }
    Ok(())
}
