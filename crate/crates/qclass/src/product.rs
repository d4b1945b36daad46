//! Symmetrized products of spectral measures on finite product spectra.
//!
//! For observables X₁…Xₙ the operator-valued measure assigns to each
//! joint outcome (λ₁,…,λₙ) the average over all n! orderings of the
//! product of the per-observable projectors. The result is Hermitian-
//! valued and normalized, and its marginals and reorderings are
//! consistent with the smaller products.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::SpectralMeasure;

/// Default cap on the number of atoms of a product space.
pub const DEFAULT_ATOM_BUDGET: usize = 1_000_000;

/// Tolerance below which two operator matrices count as the same observable.
pub const REGISTRY_DEDUP_TOL: f64 = 1e-12;

/// Current atom budget; `QCLASS_ATOM_BUDGET` overrides the default.
pub fn atom_budget() -> usize {
    std::env::var("QCLASS_ATOM_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ATOM_BUDGET)
}

/// Opaque identity of a registered observable. Distinct operator matrices
/// get distinct ids, so each id carries exactly one random variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObservableId(pub(crate) usize);

impl ObservableId {
    /// Makes an id directly. Registry-assigned ids are preferred; this is
    /// for standalone product constructions where the caller keeps the
    /// one-id-per-observable discipline.
    pub fn of(index: usize) -> Self {
        Self(index)
    }

    pub fn index(&self) -> usize {
        self.0
    }
}

impl std::fmt::Display for ObservableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One point of a finite product spectrum: a spectral index per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductAtom(pub Vec<usize>);

impl ProductAtom {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// The finite sample space sp X₁ × ⋯ × sp Xₙ with a fixed atom enumeration.
///
/// Atoms are enumerated lexicographically in (coordinate order, spectral
/// index), so every table derived from a space is reproducible
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    ids: Vec<ObservableId>,
    spectra: Vec<Vec<f64>>,
}

impl ProductSpace {
    pub fn new(ids: Vec<ObservableId>, spectra: Vec<Vec<f64>>) -> Result<Self> {
        assert_eq!(ids.len(), spectra.len());
        for (i, id) in ids.iter().enumerate() {
            if ids[i + 1..].contains(id) {
                return Err(Error::DuplicateObservable(*id));
            }
        }
        let mut atoms: usize = 1;
        for spectrum in &spectra {
            atoms = atoms.saturating_mul(spectrum.len().max(1));
        }
        let budget = atom_budget();
        if atoms > budget {
            return Err(Error::AtomBudgetExceeded { atoms, budget });
        }
        Ok(Self { ids, spectra })
    }

    pub fn ids(&self) -> &[ObservableId] {
        &self.ids
    }

    pub fn arity(&self) -> usize {
        self.ids.len()
    }

    pub fn spectrum(&self, coordinate: usize) -> &[f64] {
        &self.spectra[coordinate]
    }

    pub fn atom_count(&self) -> usize {
        self.spectra.iter().map(|s| s.len()).product()
    }

    pub fn position_of(&self, id: ObservableId) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// Flat index of an atom in the lexicographic enumeration.
    pub fn flat_index(&self, atom: &ProductAtom) -> Result<usize> {
        if atom.0.len() != self.arity() {
            return Err(Error::InvalidAtom);
        }
        let mut index = 0usize;
        for (coord, &k) in atom.0.iter().enumerate() {
            let len = self.spectra[coord].len();
            if k >= len {
                return Err(Error::InvalidAtom);
            }
            index = index * len + k;
        }
        Ok(index)
    }

    /// Atom at a flat index of the lexicographic enumeration.
    pub fn atom_at(&self, mut flat: usize) -> ProductAtom {
        let mut indices = vec![0usize; self.arity()];
        for coord in (0..self.arity()).rev() {
            let len = self.spectra[coord].len();
            indices[coord] = flat % len;
            flat /= len;
        }
        ProductAtom(indices)
    }

    /// All atoms in enumeration order.
    pub fn atoms(&self) -> impl Iterator<Item = ProductAtom> + '_ {
        (0..self.atom_count()).map(|i| self.atom_at(i))
    }

    /// Eigenvalues selected by an atom, one per coordinate.
    pub fn outcome_values(&self, atom: &ProductAtom) -> Vec<f64> {
        atom.0
            .iter()
            .enumerate()
            .map(|(coord, &k)| self.spectra[coord][k])
            .collect()
    }
}

/// The symmetrized product measure: a Hermitian operator per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMeasure {
    dim: usize,
    space: ProductSpace,
    values: Vec<ComplexMatrix>,
}

/// Builds the symmetrized product measure of the given observables.
///
/// The value at atom (λ₁,…,λₙ) is (1/n!) Σ over all orderings of
/// P₁({λ₁})⋯Pₙ({λₙ}). A single observable short-circuits to its own
/// projection-valued measure.
pub fn sym_product_measure(
    observables: &[(ObservableId, &SpectralMeasure)],
) -> Result<OperatorMeasure> {
    if observables.is_empty() {
        return Err(Error::EmptySubset);
    }
    let dim = observables[0].1.dim();
    for (_, s) in observables {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
    }
    let ids: Vec<ObservableId> = observables.iter().map(|(id, _)| *id).collect();
    let spectra: Vec<Vec<f64>> = observables.iter().map(|(_, s)| s.values()).collect();
    let space = ProductSpace::new(ids, spectra)?;

    let n = observables.len();
    let mut values = Vec::with_capacity(space.atom_count());
    if n == 1 {
        for k in 0..observables[0].1.len() {
            values.push(observables[0].1.projector(k).clone());
        }
    } else {
        let inv_factorial = 1.0 / (1..=n).map(|k| k as f64).product::<f64>();
        for flat in 0..space.atom_count() {
            let atom = space.atom_at(flat);
            let factors: Vec<&ComplexMatrix> = atom
                .0
                .iter()
                .enumerate()
                .map(|(coord, &k)| observables[coord].1.projector(k))
                .collect();
            values.push(symmetrized_product(&factors, dim).scale(inv_factorial));
        }
    }

    Ok(OperatorMeasure { dim, space, values })
}

/// Σ over all orderings of the product of the factors.
///
/// Orderings sharing the same set of left factors share their partial
/// sums: with g(S) = Σ over orderings of S of the product, g(S) =
/// Σ_{i∈S} g(S∖{i})·Z_i. The table over subsets replaces the naive n!·n
/// multiplications.
fn symmetrized_product(factors: &[&ComplexMatrix], dim: usize) -> ComplexMatrix {
    let n = factors.len();
    debug_assert!(n <= 16, "symmetrization over more than 16 factors");
    let full: usize = (1 << n) - 1;
    let mut table: Vec<Option<ComplexMatrix>> = vec![None; full + 1];
    table[0] = Some(ComplexMatrix::identity(dim));
    for mask in 1..=full {
        let mut sum = ComplexMatrix::zeros(dim);
        for (i, factor) in factors.iter().enumerate() {
            let bit = 1usize << i;
            if mask & bit != 0 {
                let prefix = table[mask ^ bit].as_ref().expect("filled in mask order");
                sum = &sum + &prefix.matmul(factor);
            }
        }
        table[mask] = Some(sum);
    }
    table[full].take().expect("full mask filled")
}

impl OperatorMeasure {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn value_at(&self, atom: &ProductAtom) -> Result<&ComplexMatrix> {
        Ok(&self.values[self.space.flat_index(atom)?])
    }

    pub fn values(&self) -> &[ComplexMatrix] {
        &self.values
    }

    /// Finite additivity: Σ of the atom values over `set`.
    pub fn measure_of_set(&self, set: &BTreeSet<ProductAtom>) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim);
        for atom in set {
            out = &out + &self.values[self.space.flat_index(atom)?];
        }
        Ok(out)
    }

    /// Σ over all atoms; the identity for a well-formed measure.
    pub fn total(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for v in &self.values {
            out = &out + v;
        }
        out
    }

    /// Pushes the measure down to a subset of its coordinates by summing
    /// the values of all atoms extending each kept atom. The kept
    /// coordinates stay in this measure's order.
    pub fn marginalize(&self, keep: &[ObservableId]) -> Result<OperatorMeasure> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut positions = Vec::with_capacity(keep.len());
        for id in keep {
            match self.space.position_of(*id) {
                Some(p) => positions.push(p),
                None => return Err(Error::UnknownId(*id)),
            }
        }
        for (i, id) in keep.iter().enumerate() {
            if keep[i + 1..].contains(id) {
                return Err(Error::DuplicateObservable(*id));
            }
        }
        positions.sort_unstable();

        let ids: Vec<ObservableId> = positions.iter().map(|&p| self.space.ids[p]).collect();
        let spectra: Vec<Vec<f64>> = positions
            .iter()
            .map(|&p| self.space.spectra[p].clone())
            .collect();
        let sub_space = ProductSpace::new(ids, spectra)?;

        let mut values = vec![ComplexMatrix::zeros(self.dim); sub_space.atom_count()];
        for flat in 0..self.space.atom_count() {
            let atom = self.space.atom_at(flat);
            let restricted = ProductAtom(positions.iter().map(|&p| atom.0[p]).collect());
            let target = sub_space.flat_index(&restricted)?;
            values[target] = &values[target] + &self.values[flat];
        }

        Ok(OperatorMeasure {
            dim: self.dim,
            space: sub_space,
            values,
        })
    }

    /// Reorders the coordinates: position i of the result takes coordinate
    /// `perm[i]` of `self`. Atom values are unchanged matrices.
    pub fn reorder(&self, perm: &[usize]) -> Result<OperatorMeasure> {
        let n = self.space.arity();
        if perm.len() != n {
            return Err(Error::InvalidPermutation);
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation);
            }
            seen[p] = true;
        }

        let ids: Vec<ObservableId> = perm.iter().map(|&p| self.space.ids[p]).collect();
        let spectra: Vec<Vec<f64>> = perm.iter().map(|&p| self.space.spectra[p].clone()).collect();
        let space = ProductSpace::new(ids, spectra)?;

        let mut values = vec![ComplexMatrix::zeros(self.dim); space.atom_count()];
        for (flat, slot) in values.iter_mut().enumerate() {
            let atom = space.atom_at(flat);
            let mut source = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                source[p] = atom.0[i];
            }
            *slot = self.values[self.space.flat_index(&ProductAtom(source))?].clone();
        }

        Ok(OperatorMeasure {
            dim: self.dim,
            space,
            values,
        })
    }

    /// True when every atom value V satisfies ‖V² − V‖ ≤ tol. Holds
    /// whenever the underlying observables mutually commute.
    pub fn is_projection_valued(&self, tol: f64) -> bool {
        self.values
            .iter()
            .all(|v| v.matmul(v).max_diff(v) <= tol)
    }
}
