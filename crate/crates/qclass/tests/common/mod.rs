//! Shared generators and independent oracles for the integration tests.
//!
//! The oracles deliberately avoid the library's computation paths: the
//! eigenvalue oracle goes through the characteristic polynomial and
//! bisection instead of rotations, and the symmetrization oracle
//! enumerates all n! orderings explicitly instead of sharing prefix
//! products.

#![allow(dead_code)]

use itertools::Itertools;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qclass::hermitian::{DensityOperator, HermitianOperator};
use qclass::matrix::{Complex64, ComplexMatrix};
use qclass::spectral::SpectralMeasure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in [0, 1) from the raw bit stream, so generated fixtures do
/// not depend on distribution implementations.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re = uniform(rng) - 0.5;
            let im = uniform(rng) - 0.5;
            m.set(i, j, Complex64::new(re, im));
        }
    }
    m
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    HermitianOperator::new(random_complex_matrix(rng, dim).hermitian_part(), 1e-12).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let a = random_complex_matrix(rng, dim);
    let psd = a.matmul(&a.adjoint());
    let trace = psd.trace().re;
    DensityOperator::new(psd.scale(1.0 / trace), 1e-9).unwrap()
}

pub fn spectral_of(op: &HermitianOperator) -> SpectralMeasure {
    op.spectral_measure().unwrap()
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ])
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[1.0, -1.0])
}

pub fn singlet() -> DensityOperator {
    let inv = 1.0 / 2.0f64.sqrt();
    let psi = [
        Complex64::new(0.0, 0.0),
        Complex64::new(inv, 0.0),
        Complex64::new(-inv, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    DensityOperator::new(ComplexMatrix::from_pure_state(&psi).unwrap(), 1e-9).unwrap()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Brute-force symmetrization: (1/n!) Σ over explicit orderings of the
/// matrix product.
pub fn sym_product_oracle(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let n = factors.len();
    let dim = factors[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for perm in (0..n).permutations(n) {
        let mut product = ComplexMatrix::identity(dim);
        for &i in &perm {
            product = product.matmul(factors[i]);
        }
        sum = &sum + &product;
    }
    sum.scale(1.0 / factorial(n))
}

/// (1/n!) Re tr[ρ {X₁⋯Xₙ}_sym] evaluated directly on operator matrices.
pub fn direct_sym_moment(rho: &DensityOperator, operators: &[&ComplexMatrix]) -> f64 {
    let sym = sym_product_oracle(operators);
    rho.matrix().trace_product(&sym).re
}

/// Coefficients of det(λI − A) as a monic real polynomial, ascending
/// powers: p(λ) = c[0] + c[1]λ + ... + λⁿ.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    // Faddeev–LeVerrier recursion.
    let mut coeffs_desc = vec![1.0f64];
    let mut m = a.clone();
    let mut c = -m.trace().re;
    coeffs_desc.push(c);
    for k in 2..=n {
        let mut shifted = m.clone();
        for i in 0..n {
            let v = shifted.get(i, i) + Complex64::new(c, 0.0);
            shifted.set(i, i, v);
        }
        m = a.matmul(&shifted);
        c = -m.trace().re / k as f64;
        coeffs_desc.push(c);
    }
    coeffs_desc.reverse();
    coeffs_desc
}

fn eval_poly(coeffs_asc: &[f64], x: f64) -> f64 {
    coeffs_asc.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Real roots of the characteristic polynomial of a Hermitian matrix,
/// found by grid bracketing plus bisection. Requires simple eigenvalues
/// (the grid must separate them).
pub fn eig_oracle(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let coeffs = characteristic_polynomial(a);
    // Gershgorin bound on the spectrum.
    let mut radius = 0.0f64;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| a.get(i, j).norm()).sum();
        radius = radius.max(row);
    }
    let lo = -radius - 1.0;
    let hi = radius + 1.0;
    let steps = 200_000;
    let h = (hi - lo) / steps as f64;

    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev_v = eval_poly(&coeffs, lo);
    for k in 1..=steps {
        let x = lo + h * k as f64;
        let v = eval_poly(&coeffs, x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v * v < 0.0 {
            let mut a_end = prev_x;
            let mut b_end = x;
            let mut fa = prev_v;
            for _ in 0..200 {
                let mid = 0.5 * (a_end + b_end);
                let fm = eval_poly(&coeffs, mid);
                if fa * fm <= 0.0 {
                    b_end = mid;
                } else {
                    a_end = mid;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a_end + b_end));
        }
        prev_x = x;
        prev_v = v;
    }
    assert_eq!(
        roots.len(),
        n,
        "oracle expected {n} simple eigenvalues, found {}",
        roots.len()
    );
    roots
}
