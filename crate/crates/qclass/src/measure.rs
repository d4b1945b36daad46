//! The quasi-classical signed measure of a state.
//!
//! Pairing a density operator with a symmetrized product measure yields
//! one real weight per joint-outcome atom. The weights sum to one but
//! need not be nonnegative; restricted to any single observable they
//! form an ordinary probability distribution, and on mutually commuting
//! collections they reproduce the joint measurement probabilities.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hermitian::DensityOperator;
use crate::matrix::ComplexMatrix;
use crate::product::{sym_product_measure, ObservableId, OperatorMeasure, ProductAtom, ProductSpace};
use crate::spectral::{group_values, BorelFunction, OutcomeSubset, SpectralMeasure, COMMUTE_TOL, VALUE_COLLISION_TOL};

/// Largest tolerated imaginary residue of tr[ρ·V]; more signals a broken
/// invariant upstream.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Default threshold separating genuine negativity from rounding.
pub const NEGATIVITY_REPORT_TOL: f64 = 1e-10;

/// Mixture weights must be positive and sum to one within this tolerance.
pub const MIXTURE_WEIGHT_TOL: f64 = 1e-12;

/// A normalized real-valued measure on a finite product spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure {
    space: ProductSpace,
    weights: Vec<f64>,
}

/// Builds the signed measure of `rho` under `measure`: one weight
/// Re tr[ρ·V] per atom.
pub fn quasi_measure(rho: &DensityOperator, measure: &OperatorMeasure) -> Result<SignedMeasure> {
    if rho.dim() != measure.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), measure.dim()));
    }
    let mut weights = Vec::with_capacity(measure.values().len());
    for value in measure.values() {
        let t = rho.matrix().trace_product(value);
        if t.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::ComplexResidue(t.im.abs()));
        }
        weights.push(t.re);
    }
    Ok(SignedMeasure {
        space: measure.space().clone(),
        weights,
    })
}

impl SignedMeasure {
    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_at(&self, atom: &ProductAtom) -> Result<f64> {
        Ok(self.weights[self.space.flat_index(atom)?])
    }

    /// Σ over all atoms; 1 for a well-formed measure.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Measure of the event described by `event`: atoms are scanned in
    /// enumeration order and each one that satisfies every listed
    /// constraint contributes its weight. No constraints means the whole
    /// space, so the total mass.
    pub fn event_value(&self, event: &EventSpec) -> Result<f64> {
        let constraints = event.resolve(&self.space)?;
        let mut sum = 0.0;
        for flat in 0..self.space.atom_count() {
            let atom = self.space.atom_at(flat);
            if constraints
                .iter()
                .all(|(pos, subset)| subset.contains(atom.0[*pos]))
            {
                sum += self.weights[flat];
            }
        }
        Ok(sum)
    }

    /// Measure of an explicit atom set; the finite-additivity route.
    pub fn set_value(&self, set: &BTreeSet<ProductAtom>) -> Result<f64> {
        let mut sum = 0.0;
        for atom in set {
            sum += self.weights[self.space.flat_index(atom)?];
        }
        Ok(sum)
    }

    /// Summary of how far the measure is from a probability measure.
    pub fn negativity_report(&self, report_tol: f64) -> NegativityReport {
        let mut min_weight = f64::INFINITY;
        let mut negative_atoms = Vec::new();
        let mut total_variation = 0.0;
        for flat in 0..self.space.atom_count() {
            let w = self.weights[flat];
            min_weight = min_weight.min(w);
            total_variation += w.abs();
            if w < -report_tol {
                negative_atoms.push((self.space.atom_at(flat), w));
            }
        }
        NegativityReport {
            min_weight,
            negative_atoms,
            total_variation,
            is_classical: min_weight >= -report_tol,
        }
    }

    /// Replaces one coordinate's spectrum by its image under φ, summing
    /// the weights of atoms that collide.
    pub fn pushforward(&self, id: ObservableId, phi: &BorelFunction) -> Result<SignedMeasure> {
        let pos = self
            .space
            .position_of(id)
            .ok_or(Error::UnknownId(id))?;
        let old_spectrum = self.space.spectrum(pos);
        let mut images = Vec::with_capacity(old_spectrum.len());
        for &v in old_spectrum {
            images.push(phi.eval(v)?);
        }
        let (new_spectrum, assignment) = group_values(&images, VALUE_COLLISION_TOL);

        let ids = self.space.ids().to_vec();
        let mut spectra: Vec<Vec<f64>> = (0..self.space.arity())
            .map(|c| self.space.spectrum(c).to_vec())
            .collect();
        spectra[pos] = new_spectrum;
        let new_space = ProductSpace::new(ids, spectra)?;

        let mut weights = vec![0.0f64; new_space.atom_count()];
        for flat in 0..self.space.atom_count() {
            let mut atom = self.space.atom_at(flat);
            atom.0[pos] = assignment[atom.0[pos]];
            weights[new_space.flat_index(&atom)?] += self.weights[flat];
        }

        Ok(SignedMeasure {
            space: new_space,
            weights,
        })
    }
}

/// Conjunctive event: an outcome subset for each of a few coordinates,
/// the rest unconstrained.
#[derive(Debug, Clone)]
pub struct EventSpec {
    constraints: Vec<(ObservableId, OutcomeSubset)>,
}

impl EventSpec {
    pub fn new(constraints: Vec<(ObservableId, OutcomeSubset)>) -> Result<Self> {
        for (i, (id, _)) in constraints.iter().enumerate() {
            if constraints[i + 1..].iter().any(|(other, _)| other == id) {
                return Err(Error::DuplicateObservable(*id));
            }
        }
        Ok(Self { constraints })
    }

    /// The unconstrained event (total mass 1).
    pub fn unconstrained() -> Self {
        Self {
            constraints: Vec::new(),
        }
    }

    pub fn constraints(&self) -> &[(ObservableId, OutcomeSubset)] {
        &self.constraints
    }

    fn resolve(&self, space: &ProductSpace) -> Result<Vec<(usize, &OutcomeSubset)>> {
        let mut resolved = Vec::with_capacity(self.constraints.len());
        for (id, subset) in &self.constraints {
            let pos = space.position_of(*id).ok_or(Error::UnknownId(*id))?;
            let len = space.spectrum(pos).len();
            for &k in subset.indices() {
                if k >= len {
                    return Err(Error::IndexOutOfRange { index: k, len });
                }
            }
            resolved.push((pos, subset));
        }
        Ok(resolved)
    }

    /// Expands the event into its explicit atom set over `space`.
    pub fn atoms(&self, space: &ProductSpace) -> Result<BTreeSet<ProductAtom>> {
        let constraints = self.resolve(space)?;
        let mut set = BTreeSet::new();
        for flat in 0..space.atom_count() {
            let atom = space.atom_at(flat);
            if constraints
                .iter()
                .all(|(pos, subset)| subset.contains(atom.0[*pos]))
            {
                set.insert(atom);
            }
        }
        Ok(set)
    }
}

/// How negative a signed measure is.
#[derive(Debug, Clone)]
pub struct NegativityReport {
    pub min_weight: f64,
    pub negative_atoms: Vec<(ProductAtom, f64)>,
    pub total_variation: f64,
    pub is_classical: bool,
}

/// Convex weights for mixing measures or states.
#[derive(Debug, Clone)]
pub struct MixtureWeights {
    alphas: Vec<f64>,
}

impl MixtureWeights {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::BadWeights("no weights given".into()));
        }
        if let Some(&bad) = alphas
            .iter()
            .find(|&&a| a.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::BadWeights(format!("weight {bad} is not positive")));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > MIXTURE_WEIGHT_TOL {
            return Err(Error::BadWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { alphas })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// Atomwise convex combination of measures over one common space.
pub fn mix(measures: &[&SignedMeasure], weights: &MixtureWeights) -> Result<SignedMeasure> {
    if measures.len() != weights.len() {
        return Err(Error::BadWeights(format!(
            "{} weights for {} measures",
            weights.len(),
            measures.len()
        )));
    }
    let space = measures[0].space.clone();
    for m in measures.iter().skip(1) {
        if m.space != space {
            return Err(Error::SpaceMismatch);
        }
    }
    let mut combined = vec![0.0f64; space.atom_count()];
    for (m, &alpha) in measures.iter().zip(weights.alphas()) {
        for (acc, &w) in combined.iter_mut().zip(&m.weights) {
            *acc += alpha * w;
        }
    }
    Ok(SignedMeasure {
        space,
        weights: combined,
    })
}

/// Joint probability tr[ρ·P₁(B₁)⋯Pₙ(Bₙ)] for mutually commuting
/// observables. Rejects the call when any pair fails to commute.
pub fn born_joint(
    rho: &DensityOperator,
    observables: &[(&SpectralMeasure, &OutcomeSubset)],
) -> Result<f64> {
    for (i, (a, _)) in observables.iter().enumerate() {
        if a.dim() != rho.dim() {
            return Err(Error::DimensionMismatch(a.dim(), rho.dim()));
        }
        for (j, (b, _)) in observables.iter().enumerate().skip(i + 1) {
            if !a.commutes_with(b, COMMUTE_TOL)? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let mut product = ComplexMatrix::identity(rho.dim());
    for (s, subset) in observables {
        product = product.matmul(&s.pvm_value(subset)?);
    }
    let t = rho.matrix().trace_product(&product);
    if t.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::ComplexResidue(t.im.abs()));
    }
    Ok(t.re)
}

/// Expectation of the product of the listed observables under the signed
/// measure: Σ over atoms of (λ₁⋯λₙ)·weight.
pub fn sym_moment(
    rho: &DensityOperator,
    observables: &[(ObservableId, &SpectralMeasure)],
) -> Result<f64> {
    let measure = sym_product_measure(observables)?;
    let mu = quasi_measure(rho, &measure)?;
    let mut sum = 0.0;
    for flat in 0..mu.space.atom_count() {
        let atom = mu.space.atom_at(flat);
        let product: f64 = mu.space.outcome_values(&atom).iter().product();
        sum += product * mu.weights[flat];
    }
    Ok(sum)
}
