//! Property tests for the measure-theoretic invariants.

mod common;

use proptest::prelude::*;

use qclass::extension::{CylinderSet, GlobalMeasureHandle, Registry};
use qclass::hermitian::HermitianOperator;
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::measure::{quasi_measure, EventSpec};
use qclass::product::{sym_product_measure, ObservableId, ProductAtom};
use qclass::spectral::{OutcomeSubset, SpectralMeasure, COMMUTE_TOL};

fn hermitian_strategy(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    proptest::collection::vec(-1.0f64..1.0, dim * dim * 2).prop_map(move |vals| {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let base = 2 * (i * dim + j);
                m.set(i, j, Complex64::new(vals[base], vals[base + 1]));
            }
        }
        HermitianOperator::new(m.hermitian_part(), 1e-12).unwrap()
    })
}

fn subset_of(len: usize, mask: u32) -> OutcomeSubset {
    OutcomeSubset::new((0..len).filter(|i| mask & (1 << i) != 0))
}

proptest! {
    #[test]
    fn pvm_values_multiply_into_intersections(
        op in hermitian_strategy(3),
        mask1 in 0u32..8,
        mask2 in 0u32..8,
    ) {
        let s = op.spectral_measure().unwrap();
        let k = s.len();
        let b1 = subset_of(k, mask1);
        let b2 = subset_of(k, mask2);
        let inter = OutcomeSubset::new(
            b1.indices().copied().filter(|&i| b2.contains(i)),
        );
        let lhs = s.pvm_value(&b1).unwrap().matmul(&s.pvm_value(&b2).unwrap());
        let rhs = s.pvm_value(&inter).unwrap();
        prop_assert!(lhs.max_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn commutation_check_is_symmetric(
        a in hermitian_strategy(3),
        b in hermitian_strategy(3),
    ) {
        let sa = a.spectral_measure().unwrap();
        let sb = b.spectral_measure().unwrap();
        prop_assert_eq!(
            sa.commutes_with(&sb, COMMUTE_TOL).unwrap(),
            sb.commutes_with(&sa, COMMUTE_TOL).unwrap()
        );
    }

    #[test]
    fn reorder_roundtrips_exactly(
        a in hermitian_strategy(2),
        b in hermitian_strategy(2),
        c in hermitian_strategy(2),
        swap in proptest::sample::select(vec![
            vec![0usize, 1, 2], vec![1, 0, 2], vec![2, 0, 1],
            vec![1, 2, 0], vec![2, 1, 0], vec![0, 2, 1],
        ]),
    ) {
        let specs = [
            a.spectral_measure().unwrap(),
            b.spectral_measure().unwrap(),
            c.spectral_measure().unwrap(),
        ];
        let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (ObservableId::of(i), s))
            .collect();
        let m = sym_product_measure(&observables).unwrap();
        let mut inverse = vec![0usize; 3];
        for (i, &p) in swap.iter().enumerate() {
            inverse[p] = i;
        }
        let back = m.reorder(&swap).unwrap().reorder(&inverse).unwrap();
        prop_assert_eq!(&back, &m);
    }
}

#[test]
fn symmetrized_values_match_the_permutation_oracle() {
    let mut rng = common::rng(47);
    for trial in 0..20 {
        let n = 2 + trial % 3;
        let dim = 2 + trial % 2;
        let ops: Vec<HermitianOperator> =
            (0..n).map(|_| common::random_hermitian(&mut rng, dim)).collect();
        let specs: Vec<SpectralMeasure> = ops.iter().map(common::spectral_of).collect();
        let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (ObservableId::of(i), s))
            .collect();
        let m = sym_product_measure(&observables).unwrap();
        for atom in m.space().atoms() {
            let factors: Vec<&ComplexMatrix> = atom
                .indices()
                .iter()
                .enumerate()
                .map(|(coord, &k)| specs[coord].projector(k))
                .collect();
            let oracle = common::sym_product_oracle(&factors);
            assert!(
                m.value_at(&atom).unwrap().max_diff(&oracle) <= 1e-12,
                "trial {trial}, atom {atom:?}"
            );
        }
    }
}

#[test]
fn reorder_matches_recomputation_on_a_random_triple() {
    let mut rng = common::rng(11);
    let ops: Vec<HermitianOperator> =
        (0..3).map(|_| common::random_hermitian(&mut rng, 3)).collect();
    let specs: Vec<SpectralMeasure> = ops.iter().map(common::spectral_of).collect();
    let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| (ObservableId::of(i), s))
        .collect();
    let m = sym_product_measure(&observables).unwrap();

    let perm = [2usize, 0, 1];
    let reordered = m.reorder(&perm).unwrap();
    let permuted: Vec<(ObservableId, &SpectralMeasure)> =
        perm.iter().map(|&p| observables[p]).collect();
    let recomputed = sym_product_measure(&permuted).unwrap();
    assert_eq!(reordered.space(), recomputed.space());
    for (a, b) in reordered.values().iter().zip(recomputed.values()) {
        assert!(a.max_diff(b) <= 1e-12);
    }
}

#[test]
fn bloch_triple_cylinder_reproduces_the_closed_form() {
    let mut registry = Registry::new();
    let ids = [
        registry
            .register(HermitianOperator::new(common::pauli_x(), 1e-12).unwrap())
            .unwrap(),
        registry
            .register(HermitianOperator::new(common::pauli_y(), 1e-12).unwrap())
            .unwrap(),
        registry
            .register(HermitianOperator::new(common::pauli_z(), 1e-12).unwrap())
            .unwrap(),
    ];
    let handle = GlobalMeasureHandle::new(&registry);

    let r = 1.0 / 3.0f64.sqrt();
    let rho = qclass::hermitian::DensityOperator::from_bloch([r, r, r], 1e-9).unwrap();
    // Atom (0,0,0) is the all-minus outcome in ascending spectral order.
    let cylinder = CylinderSet::new(ids.to_vec(), [ProductAtom(vec![0, 0, 0])].into());
    let value = handle.state_value(&rho, &cylinder).unwrap();
    let witness = (1.0 - 3.0f64.sqrt()) / 8.0;
    assert!((value - witness).abs() <= 1e-12, "{value} vs {witness}");
}

#[test]
fn multiplicativity_exhaustive_on_five_point_spectrum() {
    let op = common::random_hermitian(&mut common::rng(17), 5);
    let s = op.spectral_measure().unwrap();
    assert_eq!(s.len(), 5, "expected a simple spectrum");
    for mask1 in 0u32..32 {
        for mask2 in 0u32..32 {
            let b1 = subset_of(5, mask1);
            let b2 = subset_of(5, mask2);
            let inter = subset_of(5, mask1 & mask2);
            let lhs = s.pvm_value(&b1).unwrap().matmul(&s.pvm_value(&b2).unwrap());
            let rhs = s.pvm_value(&inter).unwrap();
            assert!(lhs.max_diff(&rhs) <= 1e-10);
        }
    }
}

#[test]
fn commuting_tuple_collapses_to_ordered_products() {
    let i2 = ComplexMatrix::identity(2);
    let mut rng = common::rng(23);
    let a = common::random_hermitian(&mut rng, 2);
    let b = common::random_hermitian(&mut rng, 2);
    let family = [
        HermitianOperator::new(a.matrix().kron(&i2), 1e-12).unwrap(),
        HermitianOperator::new(i2.kron(b.matrix()), 1e-12).unwrap(),
        HermitianOperator::new(a.matrix().matmul(a.matrix()).kron(&i2), 1e-12).unwrap(),
    ];
    let specs: Vec<SpectralMeasure> = family.iter().map(common::spectral_of).collect();
    let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| (ObservableId::of(i), s))
        .collect();
    let m = sym_product_measure(&observables).unwrap();
    assert!(m.is_projection_valued(1e-10));

    for atom in m.space().atoms() {
        let mut ordered = ComplexMatrix::identity(4);
        for (coord, &k) in atom.indices().iter().enumerate() {
            ordered = ordered.matmul(specs[coord].projector(k));
        }
        assert!(m.value_at(&atom).unwrap().max_diff(&ordered) <= 1e-10);
    }
}

#[test]
fn single_observable_restrictions_are_probabilities() {
    let mut rng = common::rng(29);
    for trial in 0..100 {
        let dim = 2 + trial % 5;
        let x = common::random_hermitian(&mut rng, dim);
        let rho = common::random_density(&mut rng, dim);
        let s = common::spectral_of(&x);
        let m = sym_product_measure(&[(ObservableId::of(0), &s)]).unwrap();
        let mu = quasi_measure(&rho, &m).unwrap();
        for k in 0..s.len() {
            let w = mu.weight_at(&ProductAtom(vec![k])).unwrap();
            let born = rho.matrix().trace_product(s.projector(k)).re;
            assert!(w >= -1e-10, "weight {w} negative");
            assert!((w - born).abs() <= 1e-9);
        }
    }
}

#[test]
fn marginal_constraint_matches_marginalized_measure() {
    let mut rng = common::rng(31);
    for trial in 0..25 {
        let dim = 2 + trial % 3;
        let ops: Vec<HermitianOperator> =
            (0..3).map(|_| common::random_hermitian(&mut rng, dim)).collect();
        let rho = common::random_density(&mut rng, dim);
        let specs: Vec<SpectralMeasure> = ops.iter().map(common::spectral_of).collect();
        let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (ObservableId::of(i), s))
            .collect();
        let joint = sym_product_measure(&observables).unwrap();
        let mu = quasi_measure(&rho, &joint).unwrap();

        // Constrain the first two coordinates, leave the third free.
        let keep = [ObservableId::of(0), ObservableId::of(1)];
        let marginal_measure = joint.marginalize(&keep).unwrap();
        let mu_marginal = quasi_measure(&rho, &marginal_measure).unwrap();
        for k0 in 0..specs[0].len() {
            for k1 in 0..specs[1].len() {
                let event = EventSpec::new(vec![
                    (ObservableId::of(0), OutcomeSubset::new([k0])),
                    (ObservableId::of(1), OutcomeSubset::new([k1])),
                ])
                .unwrap();
                let via_joint = mu.event_value(&event).unwrap();
                let via_marginal = mu_marginal
                    .weight_at(&ProductAtom(vec![k0, k1]))
                    .unwrap();
                assert!((via_joint - via_marginal).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn sample_space_does_not_depend_on_the_state() {
    let mut rng = common::rng(37);
    let ops: Vec<HermitianOperator> =
        (0..3).map(|_| common::random_hermitian(&mut rng, 3)).collect();
    let specs: Vec<SpectralMeasure> = ops.iter().map(common::spectral_of).collect();
    let observables: Vec<(ObservableId, &SpectralMeasure)> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| (ObservableId::of(i), s))
        .collect();
    let m = sym_product_measure(&observables).unwrap();

    let rho1 = common::random_density(&mut rng, 3);
    let rho2 = common::random_density(&mut rng, 3);
    let mu1 = quasi_measure(&rho1, &m).unwrap();
    let mu2 = quasi_measure(&rho2, &m).unwrap();
    assert_eq!(mu1.space(), mu2.space());
    let atoms1: Vec<ProductAtom> = mu1.space().atoms().collect();
    let atoms2: Vec<ProductAtom> = mu2.space().atoms().collect();
    assert_eq!(atoms1, atoms2);
}

#[test]
fn lifting_preserves_cylinder_values() {
    let mut rng = common::rng(41);
    let mut registry = Registry::new();
    let ids: Vec<ObservableId> = (0..3)
        .map(|_| registry.register(common::random_hermitian(&mut rng, 3)).unwrap())
        .collect();
    let handle = GlobalMeasureHandle::new(&registry);

    let narrow = CylinderSet::new(
        vec![ids[0], ids[1]],
        [ProductAtom(vec![0, 2]), ProductAtom(vec![1, 1])].into(),
    );
    let narrow_value = handle.operator_value(&narrow).unwrap();

    // Same event written over all three coordinates.
    let joint = handle.product_measure(&ids).unwrap();
    let base: std::collections::BTreeSet<ProductAtom> = joint
        .space()
        .atoms()
        .filter(|atom| {
            let pair = [atom.indices()[0], atom.indices()[1]];
            pair == [0, 2] || pair == [1, 1]
        })
        .collect();
    let wide = CylinderSet::new(ids.clone(), base);
    let wide_value = handle.operator_value(&wide).unwrap();

    assert!(narrow_value.max_diff(&wide_value) <= 1e-9);
    assert!(handle.check_well_defined(&narrow, &wide).unwrap());
}

#[test]
fn global_state_values_reproduce_event_values() {
    let mut rng = common::rng(43);
    let mut registry = Registry::new();
    let ids: Vec<ObservableId> = (0..2)
        .map(|_| registry.register(common::random_hermitian(&mut rng, 3)).unwrap())
        .collect();
    let handle = GlobalMeasureHandle::new(&registry);
    let rho = common::random_density(&mut rng, 3);

    let m = sym_product_measure(&registry.observables(&ids).unwrap()).unwrap();
    let mu = quasi_measure(&rho, &m).unwrap();

    for k0 in 0..registry.spectral(ids[0]).unwrap().len() {
        let event = EventSpec::new(vec![(ids[0], OutcomeSubset::new([k0]))]).unwrap();
        let via_measure = mu.event_value(&event).unwrap();
        let cylinder = CylinderSet::over_one(ids[0], &OutcomeSubset::new([k0]));
        let via_global = handle.state_value(&rho, &cylinder).unwrap();
        assert!((via_measure - via_global).abs() <= 1e-12);
    }
}
