//! Finite projection-valued measures.
//!
//! A `SpectralMeasure` pairs each distinct eigenvalue of an observable
//! with its orthogonal projector. Outcome sets are finite subsets of the
//! spectrum, since the measure vanishes off it.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default tolerance for commutativity checks; projector entries are O(1).
pub const COMMUTE_TOL: f64 = 1e-10;

/// Values of a function closer than this are identified as one spectral point.
pub const VALUE_COLLISION_TOL: f64 = 1e-12;

const PROJECTOR_TOL: f64 = 1e-10;

/// A finite projection-valued measure: strictly ascending eigenvalues with
/// idempotent, mutually orthogonal projectors summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    dim: usize,
    points: Vec<(f64, ComplexMatrix)>,
}

impl SpectralMeasure {
    /// Builds a measure from explicit points, checking every invariant.
    pub fn from_points(dim: usize, points: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("no spectral points".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidMeasure(
                    "eigenvalues must be strictly ascending".into(),
                ));
            }
        }
        let mut sum = ComplexMatrix::zeros(dim);
        for (value, p) in &points {
            if !value.is_finite() {
                return Err(Error::InvalidMeasure("non-finite eigenvalue".into()));
            }
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(p.dim(), dim));
            }
            if p.asymmetry() > PROJECTOR_TOL {
                return Err(Error::InvalidMeasure("projector not Hermitian".into()));
            }
            if p.matmul(p).max_diff(p) > PROJECTOR_TOL {
                return Err(Error::InvalidMeasure("projector not idempotent".into()));
            }
            sum = &sum + p;
        }
        for (i, (_, p)) in points.iter().enumerate() {
            for (_, q) in points.iter().skip(i + 1) {
                if p.matmul(q).max_norm() > PROJECTOR_TOL {
                    return Err(Error::InvalidMeasure(
                        "projectors not mutually orthogonal".into(),
                    ));
                }
            }
        }
        if sum.max_diff(&ComplexMatrix::identity(dim)) > PROJECTOR_TOL {
            return Err(Error::InvalidMeasure(
                "projectors do not sum to the identity".into(),
            ));
        }
        Ok(Self { dim, points })
    }

    /// Clustering output satisfies the invariants by construction; skip
    /// the O(K²d³) re-validation on this hot path.
    pub(crate) fn from_clustering(dim: usize, points: Vec<(f64, ComplexMatrix)>) -> Self {
        Self { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct spectral points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value(&self, index: usize) -> f64 {
        self.points[index].0
    }

    pub fn projector(&self, index: usize) -> &ComplexMatrix {
        &self.points[index].1
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|(v, _)| *v).collect()
    }

    pub fn points(&self) -> &[(f64, ComplexMatrix)] {
        &self.points
    }

    /// Value of the measure on an outcome set: Σ of the selected projectors.
    /// The empty set gives the zero matrix, the full spectrum the identity.
    pub fn pvm_value(&self, subset: &OutcomeSubset) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim);
        for &k in subset.indices() {
            if k >= self.points.len() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    len: self.points.len(),
                });
            }
            out = &out + &self.points[k].1;
        }
        Ok(out)
    }

    /// Rebuilds the operator Σ λ_k P_k.
    pub fn to_operator(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (value, p) in &self.points {
            out = &out + &p.scale(*value);
        }
        out
    }

    /// Whether every projector of `self` commutes with every projector of
    /// `other` within `tol`; this is the joint-measurability criterion.
    pub fn commutes_with(&self, other: &SpectralMeasure, tol: f64) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        for (_, p) in &self.points {
            for (_, q) in &other.points {
                if p.commutator_norm(q) > tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Functional calculus: the spectral measure of φ(X).
    ///
    /// New spectral points are the distinct values of φ on the spectrum
    /// (identified within `VALUE_COLLISION_TOL`); each new projector is the
    /// sum of the projectors that φ maps to the same value.
    pub fn apply_function(&self, phi: &BorelFunction) -> Result<SpectralMeasure> {
        let mut images = Vec::with_capacity(self.points.len());
        for (value, _) in &self.points {
            images.push(phi.eval(*value)?);
        }
        let (reps, assignment) = group_values(&images, VALUE_COLLISION_TOL);
        let mut projectors = vec![ComplexMatrix::zeros(self.dim); reps.len()];
        for (old, &group) in assignment.iter().enumerate() {
            projectors[group] = &projectors[group] + &self.points[old].1;
        }
        let points = reps.into_iter().zip(projectors).collect();
        Ok(SpectralMeasure::from_clustering(self.dim, points))
    }
}

/// A subset of a finite spectrum, held as point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSubset {
    indices: BTreeSet<usize>,
}

impl OutcomeSubset {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self {
            indices: indices.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self {
            indices: BTreeSet::new(),
        }
    }

    /// Every point of the given measure's spectrum.
    pub fn full(measure: &SpectralMeasure) -> Self {
        Self::new(0..measure.len())
    }

    /// Resolves eigenvalue literals against a spectrum. Each requested
    /// value must match a spectral point within `tol`.
    pub fn from_values(measure: &SpectralMeasure, values: &[f64], tol: f64) -> Result<Self> {
        let mut indices = BTreeSet::new();
        for &v in values {
            let mut best: Option<(usize, f64)> = None;
            for k in 0..measure.len() {
                let d = (measure.value(k) - v).abs();
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((k, d));
                }
            }
            match best {
                Some((k, d)) if d <= tol => {
                    indices.insert(k);
                }
                _ => return Err(Error::UndefinedAt(v)),
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> impl Iterator<Item = &usize> {
        self.indices.iter()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A real function of a real variable, evaluated only on finite spectra.
#[derive(Clone)]
pub struct BorelFunction {
    f: Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>,
}

impl BorelFunction {
    /// A function defined everywhere.
    pub fn total(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(move |x| Some(f(x))),
        }
    }

    /// A function that may be undefined at some points.
    pub fn partial(f: impl Fn(f64) -> Option<f64> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        (self.f)(x).ok_or(Error::UndefinedAt(x))
    }
}

impl std::fmt::Debug for BorelFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BorelFunction")
    }
}

/// Groups values whose consecutive gap (after sorting) is ≤ `tol`.
///
/// Returns the ascending group representatives (means) and the map from
/// input position to group index. Shared by spectral clustering, the
/// functional calculus, and measure pushforwards so all three identify
/// colliding values the same way.
pub(crate) fn group_values(values: &[f64], tol: f64) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let mut reps = Vec::new();
    let mut assignment = vec![0usize; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] <= tol {
            end += 1;
        }
        let members = &order[start..end];
        let mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
        for &i in members {
            assignment[i] = reps.len();
        }
        reps.push(mean);
        start = end;
    }
    (reps, assignment)
}
