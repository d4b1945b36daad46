//! Validated Hermitian operators, density operators, and the complex
//! Jacobi eigensolver.
//!
//! The eigensolver is a cyclic Jacobi iteration with complex rotations.
//! At the dimensions this crate targets (d ≤ 16) it is unconditionally
//! stable, needs no external dependency, and is bit-deterministic: the
//! same input matrix yields the same decomposition on every call.

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::spectral::SpectralMeasure;

/// Window around 1 within which a density-operator trace is silently
/// renormalized; anything further off is treated as a semantic mistake.
pub const TRACE_WINDOW: f64 = 1e-6;

/// Relative factor for the default spectral clustering tolerance.
pub const CLUSTER_RELATIVE_TOL: f64 = 1e-9;

const MAX_SWEEP_FACTOR: usize = 100;

/// A self-adjoint operator, stored in exactly symmetrized form.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates `raw` as Hermitian within `tol` and stores (M + M†)/2.
    pub fn new(raw: ComplexMatrix, tol: f64) -> Result<Self> {
        raw.check_finite()?;
        let asymmetry = raw.asymmetry();
        if asymmetry > tol {
            return Err(Error::NotHermitian(asymmetry));
        }
        Ok(Self {
            matrix: raw.hermitian_part(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigendecomposition with ascending eigenvalues.
    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_raw(&self.matrix)
    }

    /// Convenience: eigendecomposition plus clustering at the default
    /// tolerance, yielding the projection-valued measure of the operator.
    pub fn spectral_measure(&self) -> Result<SpectralMeasure> {
        let decomp = self.eig()?;
        let tol = default_cluster_tol(&decomp);
        Ok(cluster_spectrum(&decomp, tol))
    }
}

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates `raw` as a state. Hermiticity and positivity are checked
    /// against `tol`; a trace within [1 - 1e-6, 1 + 1e-6] is renormalized.
    pub fn new(raw: ComplexMatrix, tol: f64) -> Result<Self> {
        raw.check_finite()?;
        let asymmetry = raw.asymmetry();
        if asymmetry > tol {
            return Err(Error::NotHermitian(asymmetry));
        }
        let sym = raw.hermitian_part();
        let decomp = eig_raw(&sym)?;
        let lambda_min = decomp.eigenvalues.first().copied().unwrap_or(0.0);
        if lambda_min < -tol {
            return Err(Error::NegativeEigenvalue(lambda_min));
        }
        let trace = sym.trace().re;
        if trace.abs() <= 1e-12 {
            return Err(Error::ZeroTrace);
        }
        if (trace - 1.0).abs() > TRACE_WINDOW {
            return Err(Error::TraceNotOne(trace));
        }
        Ok(Self {
            matrix: sym.scale(1.0 / trace),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// State at the center of the Bloch ball in dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Qubit state from a Bloch vector (|r| ≤ 1, checked through the
    /// eigenvalue test).
    pub fn from_bloch(r: [f64; 3], tol: f64) -> Result<Self> {
        let (x, y, z) = (r[0], r[1], r[2]);
        let m = ComplexMatrix::from_rows(&[
            vec![
                Complex64::new(0.5 * (1.0 + z), 0.0),
                Complex64::new(0.5 * x, -0.5 * y),
            ],
            vec![
                Complex64::new(0.5 * x, 0.5 * y),
                Complex64::new(0.5 * (1.0 - z), 0.0),
            ],
        ])?;
        Self::new(m, tol)
    }
}

/// Result of diagonalizing a Hermitian operator: ascending eigenvalues
/// and the matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds Σ λ_k |v_k⟩⟨v_k|; used by residual checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d);
        for k in 0..d {
            let lambda = self.eigenvalues[k];
            for i in 0..d {
                let vi = self.eigenvectors.get(i, k);
                for j in 0..d {
                    let v = out.get(i, j) + vi * self.eigenvectors.get(j, k).conj() * lambda;
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Diagonalizes a validated Hermitian operator.
pub fn eig_hermitian(op: &HermitianOperator) -> Result<EigenDecomposition> {
    eig_raw(op.matrix())
}

/// Cyclic complex Jacobi iteration. `m` must already be Hermitian.
pub(crate) fn eig_raw(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let d = m.dim();
    if d == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![m.get(0, 0).re],
            eigenvectors: ComplexMatrix::identity(1),
        });
    }

    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(d);
    let scale = m.max_norm().max(f64::MIN_POSITIVE);
    let threshold = f64::EPSILON * scale;
    let max_sweeps = MAX_SWEEP_FACTOR * d * d;

    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(max_sweeps));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k).re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..d {
            eigenvectors.set(row, new_col, v.get(row, old_col));
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// With α = a_pp, γ = a_qq and a_pq = r·e^{iφ}, the plane rotation
/// U_pp = c, U_pq = -s·e^{iφ}, U_qp = s·e^{-iφ}, U_qq = c zeroes the
/// off-diagonal pair when cot 2θ = (α - γ)/(2r). The update below applies
/// A ← U†AU and accumulates V ← V·U, keeping A exactly Hermitian.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a.get(p, q);
    let r = beta.norm();
    if r == 0.0 {
        return;
    }
    let phase = beta / r;
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;

    let tau = (alpha - gamma) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sigma = phase * s;

    let d = a.dim();
    for k in 0..d {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        let new_kp = akp * c + akq * sigma.conj();
        let new_kq = akq * c - akp * sigma;
        a.set(k, p, new_kp);
        a.set(k, q, new_kq);
        a.set(p, k, new_kp.conj());
        a.set(q, k, new_kq.conj());
    }

    let two_scr = 2.0 * s * c * r;
    a.set(p, p, Complex64::new(alpha * c * c + gamma * s * s + two_scr, 0.0));
    a.set(q, q, Complex64::new(alpha * s * s + gamma * c * c - two_scr, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));

    for k in 0..d {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * sigma.conj());
        v.set(k, q, vkq * c - vkp * sigma);
    }
}

/// Default clustering tolerance: 1e-9 relative to the spectral range.
pub fn default_cluster_tol(decomp: &EigenDecomposition) -> f64 {
    match (decomp.eigenvalues.first(), decomp.eigenvalues.last()) {
        (Some(lo), Some(hi)) => CLUSTER_RELATIVE_TOL * (hi - lo),
        _ => 0.0,
    }
}

/// Merges near-degenerate eigenvalues into spectral points.
///
/// Consecutive eigenvalues with gap ≤ `cluster_tol` land in the same
/// cluster; the representative value is the cluster mean and the
/// projector is the sum of |v⟩⟨v| over the cluster members.
pub fn cluster_spectrum(decomp: &EigenDecomposition, cluster_tol: f64) -> SpectralMeasure {
    let d = decomp.dim();
    let mut points: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && decomp.eigenvalues[end] - decomp.eigenvalues[end - 1] <= cluster_tol {
            end += 1;
        }
        let members = &decomp.eigenvalues[start..end];
        let value = members.iter().sum::<f64>() / members.len() as f64;
        let mut projector = ComplexMatrix::zeros(d);
        for k in start..end {
            for i in 0..d {
                let vi = decomp.eigenvectors.get(i, k);
                for j in 0..d {
                    let v = projector.get(i, j) + vi * decomp.eigenvectors.get(j, k).conj();
                    projector.set(i, j, v);
                }
            }
        }
        points.push((value, projector));
        start = end;
    }
    SpectralMeasure::from_clustering(d, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{pauli_x, pauli_y, pauli_z};

    #[test]
    fn accepts_pauli_z_unchanged() {
        let op = HermitianOperator::new(pauli_z(), 1e-12).unwrap();
        assert_eq!(op.matrix().max_diff(&pauli_z()), 0.0);
    }

    #[test]
    fn accepts_exact_pauli_y() {
        assert!(HermitianOperator::new(pauli_y(), 1e-12).is_ok());
    }

    #[test]
    fn rejects_maximal_asymmetry() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        match HermitianOperator::new(m, 1e-12) {
            Err(Error::NotHermitian(a)) => assert!((a - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_entries() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            HermitianOperator::new(m, 1e-12),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
    }

    #[test]
    fn density_accepts_pure_and_mixed() {
        let pure = ComplexMatrix::diagonal(&[1.0, 0.0]);
        assert!(DensityOperator::new(pure, 1e-9).is_ok());
        let mixed = ComplexMatrix::identity(2).scale(0.5);
        let rho = DensityOperator::new(mixed, 1e-9).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_rejects_negative_eigenvalue() {
        let m = ComplexMatrix::diagonal(&[1.0, -0.1]);
        match DensityOperator::new(m, 1e-9) {
            Err(Error::NegativeEigenvalue(l)) => assert!((l + 0.1).abs() < 1e-12),
            other => panic!("expected NegativeEigenvalue, got {other:?}"),
        }
    }

    #[test]
    fn density_renormalizes_small_trace_drift() {
        let m = ComplexMatrix::diagonal(&[0.5 + 2e-7, 0.5]);
        let rho = DensityOperator::new(m, 1e-9).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_rejects_wrong_trace() {
        let m = ComplexMatrix::diagonal(&[0.25, 0.25]);
        assert!(matches!(
            DensityOperator::new(m, 1e-9),
            Err(Error::TraceNotOne(_))
        ));
    }

    #[test]
    fn pauli_x_spectrum() {
        let op = HermitianOperator::new(pauli_x(), 1e-12).unwrap();
        let decomp = op.eig().unwrap();
        assert!((decomp.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((decomp.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let op = HermitianOperator::new(ComplexMatrix::identity(3), 1e-12).unwrap();
        let decomp = op.eig().unwrap();
        assert_eq!(decomp.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eig_is_deterministic() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.3, 0.0), Complex64::new(0.2, 0.7)],
            vec![Complex64::new(0.2, -0.7), Complex64::new(-0.4, 0.0)],
        ])
        .unwrap();
        let op = HermitianOperator::new(m, 1e-12).unwrap();
        let a = op.eig().unwrap();
        let b = op.eig().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cluster_merges_degenerate_identity() {
        let op = HermitianOperator::new(ComplexMatrix::identity(2), 1e-12).unwrap();
        let s = op.spectral_measure().unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.value(0) - 1.0).abs() < 1e-15);
        assert!(s.projector(0).max_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn cluster_merges_forced_by_tolerance() {
        // Synthetic decomposition with a 1e-13 split well under the tolerance.
        let decomp = EigenDecomposition {
            eigenvalues: vec![1.0, 1.0 + 1e-13, 2.0],
            eigenvectors: ComplexMatrix::identity(3),
        };
        let s = cluster_spectrum(&decomp, 1e-10);
        assert_eq!(s.len(), 2);
        assert!((s.projector(0).trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_z_clusters_to_two_points() {
        let op = HermitianOperator::new(pauli_z(), 1e-12).unwrap();
        let s = op.spectral_measure().unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.value(0) + 1.0).abs() < 1e-14);
        assert!((s.value(1) - 1.0).abs() < 1e-14);
        assert!(s.projector(0).max_diff(&ComplexMatrix::diagonal(&[0.0, 1.0])) < 1e-14);
        assert!(s.projector(1).max_diff(&ComplexMatrix::diagonal(&[1.0, 0.0])) < 1e-14);
    }
}
