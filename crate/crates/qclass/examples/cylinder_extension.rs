//! The global operator measure on cylinder events over a registry of
//! observables, evaluated lazily, with well-definedness and additivity
//! audits.
//!
//! ```bash
//! cargo run --example cylinder_extension
//! ```

use std::collections::BTreeSet;

use qclass::extension::{CylinderSet, GlobalMeasureHandle, Registry};
use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::product::ProductAtom;
use qclass::spectral::OutcomeSubset;

fn main() -> qclass::Result<()> {
    let mut registry = Registry::new();
    let z = registry.register(HermitianOperator::new(
        ComplexMatrix::diagonal(&[1.0, -1.0]),
        1e-12,
    )?)?;
    let x = registry.register(HermitianOperator::new(
        ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])?,
        1e-12,
    )?)?;
    // Registering the same matrix twice hands back the original id.
    let z_again = registry.register(HermitianOperator::new(
        ComplexMatrix::diagonal(&[1.0, -1.0]),
        1e-12,
    )?)?;
    println!("z registered twice: {z} == {z_again}");

    let handle = GlobalMeasureHandle::new(&registry);

    // The full-space cylinder evaluates to the identity.
    let full = CylinderSet::over_one(z, &OutcomeSubset::new([0, 1]));
    println!(
        "value on the full space = identity? {}",
        handle
            .operator_value(&full)?
            .max_diff(&ComplexMatrix::identity(2))
            < 1e-12
    );

    // One event, two spellings: z = +1 alone, and z = +1 with x free.
    let narrow = CylinderSet::over_one(z, &OutcomeSubset::new([1]));
    let wide = CylinderSet::new(
        vec![z, x],
        BTreeSet::from([ProductAtom(vec![1, 0]), ProductAtom(vec![1, 1])]),
    );
    println!(
        "same event, two spellings, one value: {}",
        handle.check_well_defined(&narrow, &wide)?
    );

    // Complementary cylinders add up to the identity.
    let plus = CylinderSet::over_one(z, &OutcomeSubset::new([1]));
    let minus = CylinderSet::over_one(z, &OutcomeSubset::new([0]));
    println!(
        "complementary cylinders additive: {}",
        handle.check_additivity(&plus, &minus)?
    );

    // State values on cylinders agree with the Born rule.
    let up = DensityOperator::new(ComplexMatrix::diagonal(&[1.0, 0.0]), 1e-9)?;
    println!("μ(z = +1) for |0⟩⟨0| = {:.6}", handle.state_value(&up, &plus)?);
    println!(
        "μ(z = +1, x = +1)     = {:.6}",
        handle.state_value(
            &up,
            &CylinderSet::new(vec![z, x], BTreeSet::from([ProductAtom(vec![1, 1])]))
        )?
    );
    Ok(())
}
