//! The symmetrized product measure of two non-commuting observables:
//! Hermitian-valued, normalized, consistent under marginalization, but
//! not projection-valued.
//!
//! ```bash
//! cargo run --example symmetrized_product
//! ```

use qclass::hermitian::HermitianOperator;
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::product::{sym_product_measure, ObservableId};

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
    println!("atoms: {}", joint.space().atom_count());

    for atom in joint.space().atoms() {
        let outcome = joint.space().outcome_values(&atom);
        let value = joint.value_at(&atom)?;
        println!("\noutcome (z={:+.0}, x={:+.0}):", outcome[0], outcome[1]);
        for i in 0..2 {
            let row: Vec<String> = (0..2)
                .map(|j| format!("{:+.4}", value.get(i, j).re))
                .collect();
            println!("  [{}]", row.join(", "));
        }
    }

    println!(
        "\nsums to identity within {:.3e}",
        joint.total().max_diff(&ComplexMatrix::identity(2))
    );
    println!(
        "projection-valued: {} (z and x do not commute)",
        joint.is_projection_valued(1e-10)
    );

    // Marginalizing away the x coordinate recovers the z measure.
    let only_z = joint.marginalize(&[ObservableId::of(0)])?;
    let direct = sym_product_measure(&[(ObservableId::of(0), &sz)])?;
    let worst = only_z
        .values()
        .iter()
        .zip(direct.values())
        .fold(0.0f64, |m, (a, b)| m.max(a.max_diff(b)));
    println!("marginal vs direct z measure: {worst:.3e}");
    Ok(())
}
