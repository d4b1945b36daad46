//! A registry-backed global operator measure on cylinder sets.
//!
//! The global sample space — one coordinate per registered observable —
//! is never materialized. Every event in its algebra is a cylinder over
//! finitely many coordinates, so the global measure can be evaluated
//! lazily: canonicalize the cylinder, build (or reuse) the symmetrized
//! product over the constrained coordinates, and sum atom values.
//! `check_well_defined` and `check_additivity` audit that this lazy
//! evaluation assigns one value per event and adds over disjoint unions.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::hermitian::{DensityOperator, HermitianOperator};
use crate::matrix::ComplexMatrix;
use crate::measure::IMAG_RESIDUE_TOL;
use crate::product::{
    sym_product_measure, ObservableId, OperatorMeasure, ProductAtom, REGISTRY_DEDUP_TOL,
};
use crate::spectral::{OutcomeSubset, SpectralMeasure};

/// Tolerance for the consistency audits.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// The finite working set of observables, each with a stable id and a
/// precomputed spectral measure. Registering the same matrix twice
/// (entrywise within 1e-12) returns the original id.
#[derive(Debug, Default)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

#[derive(Debug)]
struct RegistryEntry {
    id: ObservableId,
    operator: HermitianOperator,
    spectral: SpectralMeasure,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an observable, deduplicating by matrix equality.
    pub fn register(&mut self, operator: HermitianOperator) -> Result<ObservableId> {
        if let Some(first) = self.entries.first() {
            if first.operator.dim() != operator.dim() {
                return Err(Error::DimensionMismatch(first.operator.dim(), operator.dim()));
            }
        }
        for entry in &self.entries {
            if entry.operator.matrix().max_diff(operator.matrix()) <= REGISTRY_DEDUP_TOL {
                return Ok(entry.id);
            }
        }
        let id = ObservableId(self.entries.len());
        let spectral = operator.spectral_measure()?;
        self.entries.push(RegistryEntry {
            id,
            operator,
            spectral,
        });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.entries.first().map(|e| e.operator.dim())
    }

    pub fn ids(&self) -> Vec<ObservableId> {
        self.entries.iter().map(|e| e.id).collect()
    }

    pub fn operator(&self, id: ObservableId) -> Result<&HermitianOperator> {
        self.entry(id).map(|e| &e.operator)
    }

    pub fn spectral(&self, id: ObservableId) -> Result<&SpectralMeasure> {
        self.entry(id).map(|e| &e.spectral)
    }

    /// Resolves a list of ids into (id, spectral measure) pairs.
    pub fn observables(
        &self,
        ids: &[ObservableId],
    ) -> Result<Vec<(ObservableId, &SpectralMeasure)>> {
        ids.iter()
            .map(|&id| Ok((id, self.spectral(id)?)))
            .collect()
    }

    fn entry(&self, id: ObservableId) -> Result<&RegistryEntry> {
        self.entries
            .get(id.0)
            .filter(|e| e.id == id)
            .ok_or(Error::UnregisteredId(id))
    }
}

/// A finitely-indexed event of the global algebra: the preimage of a
/// base atom set under the projection onto the listed coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    ids: Vec<ObservableId>,
    base: BTreeSet<ProductAtom>,
}

impl CylinderSet {
    pub fn new(ids: Vec<ObservableId>, base: BTreeSet<ProductAtom>) -> Self {
        Self { ids, base }
    }

    /// Cylinder constraining a single coordinate to an outcome subset.
    pub fn over_one(id: ObservableId, subset: &OutcomeSubset) -> Self {
        let base = subset
            .indices()
            .map(|&k| ProductAtom(vec![k]))
            .collect();
        Self {
            ids: vec![id],
            base,
        }
    }

    pub fn ids(&self) -> &[ObservableId] {
        &self.ids
    }

    pub fn base(&self) -> &BTreeSet<ProductAtom> {
        &self.base
    }
}

/// Lazy interface to the global operator measure over a registry.
///
/// Product measures are memoized per id-set; reordering a cylinder's
/// coordinates never changes its value, so the memo key is the sorted id
/// tuple. Concurrent lookups may duplicate a construction; both copies
/// are identical, and the first insert wins.
pub struct GlobalMeasureHandle<'a> {
    registry: &'a Registry,
    memo: Mutex<HashMap<Vec<ObservableId>, Arc<OperatorMeasure>>>,
}

impl<'a> GlobalMeasureHandle<'a> {
    pub fn new(registry: &'a Registry) -> Self {
        Self {
            registry,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &Registry {
        self.registry
    }

    /// Memoized symmetrized product over an ascending id tuple.
    pub fn product_measure(&self, ids: &[ObservableId]) -> Result<Arc<OperatorMeasure>> {
        let key = ids.to_vec();
        if let Some(found) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(Arc::clone(found));
        }
        let observables = self.registry.observables(ids)?;
        let measure = Arc::new(sym_product_measure(&observables)?);
        let mut memo = self.memo.lock().expect("memo poisoned");
        let entry = memo.entry(key).or_insert_with(|| Arc::clone(&measure));
        Ok(Arc::clone(entry))
    }

    /// Value of the global operator measure on a cylinder.
    pub fn operator_value(&self, cylinder: &CylinderSet) -> Result<ComplexMatrix> {
        let dim = self.require_dim()?;
        let canonical = self.canonicalize(cylinder)?;
        if canonical.ids.is_empty() {
            // 0-ary cylinder: either the full space or the empty set.
            return Ok(if canonical.base.is_empty() {
                ComplexMatrix::zeros(dim)
            } else {
                ComplexMatrix::identity(dim)
            });
        }
        let measure = self.product_measure(&canonical.ids)?;
        measure.measure_of_set(&canonical.base)
    }

    /// Re tr[ρ · operator_value], the global signed measure of the state.
    pub fn state_value(&self, rho: &DensityOperator, cylinder: &CylinderSet) -> Result<f64> {
        let value = self.operator_value(cylinder)?;
        if rho.dim() != value.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), value.dim()));
        }
        let t = rho.matrix().trace_product(&value);
        if t.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::ComplexResidue(t.im.abs()));
        }
        Ok(t.re)
    }

    /// Decides whether two cylinders denote the same event, by lifting
    /// both to their union id-set and comparing atom sets. When they do,
    /// also audits that the two evaluation routes agree within 1e-9.
    pub fn check_well_defined(&self, c1: &CylinderSet, c2: &CylinderSet) -> Result<bool> {
        self.validate(c1)?;
        self.validate(c2)?;
        let union = union_ids(c1, c2);
        let lifted1 = self.lift(c1, &union)?;
        let lifted2 = self.lift(c2, &union)?;
        if lifted1 != lifted2 {
            return Ok(false);
        }
        let v1 = self.operator_value(c1)?;
        let v2 = self.operator_value(c2)?;
        let deviation = v1.max_diff(&v2);
        if deviation > CONSISTENCY_TOL {
            return Err(Error::ConsistencyViolation(deviation));
        }
        Ok(true)
    }

    /// Audits additivity over two disjoint cylinders: the value of their
    /// union (formed on the lifted space) must equal the sum of values.
    pub fn check_additivity(&self, c1: &CylinderSet, c2: &CylinderSet) -> Result<bool> {
        self.validate(c1)?;
        self.validate(c2)?;
        let union = union_ids(c1, c2);
        let lifted1 = self.lift(c1, &union)?;
        let lifted2 = self.lift(c2, &union)?;
        if lifted1.intersection(&lifted2).next().is_some() {
            return Err(Error::NotDisjoint);
        }
        let mut combined = lifted1;
        combined.extend(lifted2);
        let whole = self.operator_value(&CylinderSet::new(union, combined))?;
        let parts = &self.operator_value(c1)? + &self.operator_value(c2)?;
        Ok(whole.max_diff(&parts) <= CONSISTENCY_TOL)
    }

    fn require_dim(&self) -> Result<usize> {
        self.registry
            .dim()
            .ok_or_else(|| Error::InvalidMeasure("registry is empty".into()))
    }

    fn validate(&self, cylinder: &CylinderSet) -> Result<()> {
        for (i, id) in cylinder.ids.iter().enumerate() {
            self.registry.spectral(*id)?;
            if cylinder.ids[i + 1..].contains(id) {
                return Err(Error::DuplicateObservable(*id));
            }
        }
        for atom in &cylinder.base {
            if atom.0.len() != cylinder.ids.len() {
                return Err(Error::InvalidAtom);
            }
            for (coord, &k) in atom.0.iter().enumerate() {
                if k >= self.registry.spectral(cylinder.ids[coord])?.len() {
                    return Err(Error::InvalidAtom);
                }
            }
        }
        Ok(())
    }

    /// Sorts coordinates into registry order and drops those the base
    /// does not constrain, so equal events share one canonical form.
    fn canonicalize(&self, cylinder: &CylinderSet) -> Result<CylinderSet> {
        self.validate(cylinder)?;

        let mut order: Vec<usize> = (0..cylinder.ids.len()).collect();
        order.sort_by_key(|&i| cylinder.ids[i]);
        let mut ids: Vec<ObservableId> = order.iter().map(|&i| cylinder.ids[i]).collect();
        let mut base: BTreeSet<ProductAtom> = cylinder
            .base
            .iter()
            .map(|atom| ProductAtom(order.iter().map(|&i| atom.0[i]).collect()))
            .collect();

        if base.is_empty() {
            // The empty event constrains nothing; canonical form is 0-ary.
            return Ok(CylinderSet::new(Vec::new(), BTreeSet::new()));
        }

        // A coordinate is unconstrained when, for every assignment of the
        // remaining coordinates appearing in the base, all of its spectral
        // indices appear. Dropping one such coordinate cannot make another
        // constrained, so a greedy sweep reaches the canonical form.
        loop {
            let mut dropped = false;
            for coord in 0..ids.len() {
                let spectrum_len = self.registry.spectral(ids[coord])?.len();
                let mut groups: HashMap<Vec<usize>, BTreeSet<usize>> = HashMap::new();
                for atom in &base {
                    let mut rest = atom.0.clone();
                    let k = rest.remove(coord);
                    groups.entry(rest).or_default().insert(k);
                }
                if groups.values().all(|seen| seen.len() == spectrum_len) {
                    ids.remove(coord);
                    base = base
                        .iter()
                        .map(|atom| {
                            let mut rest = atom.0.clone();
                            rest.remove(coord);
                            ProductAtom(rest)
                        })
                        .collect();
                    dropped = true;
                    break;
                }
            }
            if !dropped || ids.is_empty() {
                break;
            }
        }

        Ok(CylinderSet::new(ids, base))
    }

    /// Atom set of the cylinder on a superset of its coordinates.
    fn lift(
        &self,
        cylinder: &CylinderSet,
        target_ids: &[ObservableId],
    ) -> Result<BTreeSet<ProductAtom>> {
        let positions: Vec<usize> = cylinder
            .ids
            .iter()
            .map(|id| {
                target_ids
                    .iter()
                    .position(|t| t == id)
                    .ok_or(Error::UnknownId(*id))
            })
            .collect::<Result<_>>()?;

        let lens: Vec<usize> = target_ids
            .iter()
            .map(|&id| self.registry.spectral(id).map(|s| s.len()))
            .collect::<Result<_>>()?;
        let total: usize = lens.iter().product();

        let mut lifted = BTreeSet::new();
        for mut flat in 0..total {
            let mut atom = vec![0usize; lens.len()];
            for coord in (0..lens.len()).rev() {
                atom[coord] = flat % lens[coord];
                flat /= lens[coord];
            }
            let restricted = ProductAtom(positions.iter().map(|&p| atom[p]).collect());
            if cylinder.base.contains(&restricted) {
                lifted.insert(ProductAtom(atom));
            }
        }
        Ok(lifted)
    }
}

fn union_ids(c1: &CylinderSet, c2: &CylinderSet) -> Vec<ObservableId> {
    let mut union: BTreeSet<ObservableId> = c1.ids.iter().copied().collect();
    union.extend(c2.ids.iter().copied());
    union.into_iter().collect()
}
